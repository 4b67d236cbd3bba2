#include "spinal/word.hpp"

namespace spinal {

Word concat(const Word &a, const Word &b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

Word inverse(const Word &w, const GroupTable &r) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (it->is_rooted())
      out.push_back(Symbol::rooted(r.inv(it->id)));
    else
      out.push_back(Symbol::directed(it->id, -it->sign));
  }
  return out;
}

Word power(const Word &w, long long k, const GroupTable &r) {
  Word base = k < 0 ? inverse(w, r) : w;
  if (k < 0)
    k = -k;
  Word out;
  out.reserve(base.size() * static_cast<std::size_t>(k));
  for (long long i = 0; i < k; ++i)
    out.insert(out.end(), base.begin(), base.end());
  return free_reduce(out, r);
}

Word conjugate(const Word &w, const Word &by, const GroupTable &r) {
  return free_reduce(concat(concat(inverse(by, r), w), by), r);
}

Word commutator(const Word &a, const Word &b, const GroupTable &r) {
  return free_reduce(
      concat(concat(inverse(a, r), inverse(b, r)), concat(a, b)), r);
}

Word free_reduce(const Word &w, const GroupTable &r) {
  Word out;
  for (auto const &s : w) {
    if (s.is_rooted()) {
      if (s.id == r.identity())
        continue;
      if (!out.empty() && out.back().is_rooted()) {
        auto p = r.mul(out.back().id, s.id);
        out.pop_back();
        if (p != r.identity())
          out.push_back(Symbol::rooted(p));
        continue;
      }
      out.push_back(s);
    } else {
      if (!out.empty() && !out.back().is_rooted() && out.back().id == s.id &&
          out.back().sign == -s.sign) {
        out.pop_back();
        continue;
      }
      out.push_back(s);
    }
  }
  return out;
}

} // namespace spinal
