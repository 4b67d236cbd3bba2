#include "spinal/permutation.hpp"

#include <numeric>

#include "spinal/errors.hpp"

namespace spinal {

Permutation::Permutation(unsigned degree) : images_(degree) {
  std::iota(images_.begin(), images_.end(), 0u);
}

Permutation::Permutation(std::vector<std::uint32_t> images)
  : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (auto i : images_) {
    if (i >= images_.size() || seen[i])
      throw Error(ErrorKind::Input, "images do not form a permutation");
    seen[i] = true;
  }
}

Permutation Permutation::from_cycles(
    unsigned degree, const std::vector<std::vector<unsigned>> &cycles) {
  Permutation p(degree);
  std::vector<bool> used(degree, false);
  for (auto const &c : cycles) {
    for (auto x : c) {
      if (x >= degree)
        throw Error(ErrorKind::Input,
                    "cycle point " + std::to_string(x + 1) + " out of range");
      if (used[x])
        throw Error(ErrorKind::Input,
                    "point " + std::to_string(x + 1) + " repeated in cycles");
      used[x] = true;
    }
    for (std::size_t i = 0; i < c.size(); ++i)
      p.images_[c[i]] = c[(i + 1) % c.size()];
  }
  return p;
}

bool Permutation::is_identity() const {
  for (unsigned i = 0; i < images_.size(); ++i)
    if (images_[i] != i)
      return false;
  return true;
}

Permutation Permutation::operator*(Permutation const &rhs) const {
  if (rhs.degree() != degree())
    throw Error(ErrorKind::Input, "degree mismatch in composition");
  Permutation out(degree());
  for (unsigned i = 0; i < degree(); ++i)
    out.images_[i] = images_[rhs.images_[i]];
  return out;
}

Permutation Permutation::inverse() const {
  Permutation out(degree());
  for (unsigned i = 0; i < degree(); ++i)
    out.images_[images_[i]] = i;
  return out;
}

std::vector<std::vector<unsigned>> Permutation::cycles() const {
  std::vector<std::vector<unsigned>> res;
  std::vector<bool> seen(degree(), false);
  for (unsigned i = 0; i < degree(); ++i) {
    if (seen[i] || images_[i] == i)
      continue;
    std::vector<unsigned> c;
    for (unsigned x = i; !seen[x]; x = images_[x]) {
      seen[x] = true;
      c.push_back(x);
    }
    res.push_back(std::move(c));
  }
  return res;
}

std::string Permutation::str() const {
  auto cs = cycles();
  if (cs.empty())
    return "()";
  std::string s;
  for (auto const &c : cs) {
    s += '(';
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i)
        s += ' ';
      s += std::to_string(c[i] + 1);
    }
    s += ')';
  }
  return s;
}

} // namespace spinal
