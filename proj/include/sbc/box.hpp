#pragma once

#include <memory>
#include <utility>

namespace sbc {

// Immutable heap cell with value semantics: copies share storage, equality
// compares the pointee. Used to build recursive ASTs out of std::variant.
template <typename T>
class Box {
public:
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  const T& get() const { return *ptr_; }

  friend bool operator==(const Box& a, const Box& b) {
    return a.ptr_ == b.ptr_ || *a.ptr_ == *b.ptr_;
  }

private:
  std::shared_ptr<const T> ptr_;
};

}  // namespace sbc
