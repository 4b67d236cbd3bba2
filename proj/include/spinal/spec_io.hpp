#ifndef SPINAL_SPEC_IO_HPP
#define SPINAL_SPEC_IO_HPP

#include <string>

#include "spinal/spinal_spec.hpp"

namespace spinal {

// Words are whitespace separated tokens `gen`, `gen^k` or `id`.
ElementId parse_rword(const GroupTable &r, const std::string &text);
Word parse_gword(const SpinalSpec &spec, const std::string &text);
std::string word_str(const SpinalSpec &spec, const Word &w);
// Comma separated R-words, one per letter. Empty text is the root.
Vertex parse_vertex(const SpinalSpec &spec, const std::string &text);

// JSON spec documents. Errors are ErrorKind::Parse.
SpinalSpec parse_spec(const std::string &json_text);
SpinalSpec load_spec(const std::string &path);
std::string export_spec(const SpinalSpec &spec);

} // namespace spinal

#endif // SPINAL_SPEC_IO_HPP
