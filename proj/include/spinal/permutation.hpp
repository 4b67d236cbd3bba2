#ifndef SPINAL_PERMUTATION_HPP
#define SPINAL_PERMUTATION_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace spinal {

// A permutation of [0, degree), stored by images.
class Permutation {
public:
  Permutation() = default;
  explicit Permutation(unsigned degree);
  explicit Permutation(std::vector<std::uint32_t> images);

  // Build from 0-based cycles; points not mentioned are fixed.
  static Permutation from_cycles(unsigned degree,
                                 const std::vector<std::vector<unsigned>> &cycles);

  unsigned degree() const { return static_cast<unsigned>(images_.size()); }
  std::uint32_t operator[](unsigned i) const { return images_[i]; }
  const std::vector<std::uint32_t> &images() const { return images_; }

  bool is_identity() const;

  // (*this * rhs)(x) = (*this)(rhs(x))
  Permutation operator*(Permutation const &rhs) const;
  Permutation inverse() const;

  std::vector<std::vector<unsigned>> cycles() const;
  std::string str() const; // 1-based cycle notation

  bool operator==(Permutation const &other) const = default;
  auto operator<=>(Permutation const &other) const = default;

private:
  std::vector<std::uint32_t> images_;
};

} // namespace spinal

#endif // SPINAL_PERMUTATION_HPP
