#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sbc/model.hpp"

namespace sbc {

// Source text of a `.sbc` file after newline normalization, with line access
// for diagnostics.
class SourceModel {
public:
  SourceModel(std::string path, std::string_view raw);
  static SourceModel load(const std::string& path);  // throws SbcError on I/O failure

  const std::string& path() const { return path_; }
  const std::string& text() const { return text_; }
  std::string_view line(int n) const;

private:
  std::string path_;
  std::string text_;
  std::vector<std::size_t> line_starts_;
};

struct ParseResult {
  Model model;  // best effort when diagnostics are present
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return !has_errors(diagnostics); }
};

// "name(in a : String; out b : Real)". Throws ParseError.
ChannelSignature parse_channel_signature(std::string_view text);

// Never throws. Syntax errors are recovered at declaration / transition
// granularity; duplicate declarations and unresolved references are reported.
ParseResult parse_model(std::string_view text);

// Canonical text: header comment, then declarations grouped by kind
// (actor, component, channel, interaction, itg, def) and sorted by name.
std::string print_model(const Model& model);
std::string print_itg(const Itg& itg);

}  // namespace sbc
