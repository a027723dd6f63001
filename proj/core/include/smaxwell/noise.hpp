#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "smaxwell/field.hpp"
#include "smaxwell/grid.hpp"

namespace smaxwell {

/// Truncated Karhunen-Loeve expansion of the Q-Wiener process:
///   dW_ijk = 2 sqrt(2 tau) sum_{m,l,q=1..M} eta_mlq sin(m pi x_i) sin(l pi y_j) sin(q pi z_k) xi_mlq
/// with eta_mlq = 1/sqrt(m^3 + l^3 + q^3) and xi iid N(0,1).
struct NoiseSpec {
  std::size_t modes = 10;
  std::uint64_t seed = 0;
  std::uint64_t path_id = 0;
};

struct BasisTables {
  std::size_t modes = 0;
  Extents extents{};
  /// sines[axis][(m-1) * count + i] = sin(m pi x_i)
  std::array<std::vector<double>, 3> sines;
  /// eta[((m-1) * M + (l-1)) * M + (q-1)]
  std::vector<double> eta;

  double sine(Axis axis, std::size_t m, std::size_t index) const {
    return sines[axis_index(axis)][(m - 1) * extents[axis_index(axis)] + index];
  }
  double coefficient(std::size_t m, std::size_t l, std::size_t q) const {
    return eta[((m - 1) * modes + (l - 1)) * modes + (q - 1)];
  }
};

BasisTables precompute_basis(const Grid& grid, std::size_t modes);

/// Analytic node variance of one increment: 8 tau sum eta^2 sin^2 sin^2 sin^2.
double increment_variance(const BasisTables& tables, double tau, std::size_t i, std::size_t j, std::size_t k);

/// Standard normal source for one (seed, path_id) stream. seek(step) rewinds
/// the generator to the start of that step's M^3 block, so any step can be
/// regenerated independently of the others.
class NoiseRng {
 public:
  NoiseRng(std::uint64_t seed, std::uint64_t path_id);

  void seek(std::uint64_t step);
  double next_gaussian() { return normal_(engine_); }

 private:
  std::uint64_t seed_;
  std::uint64_t path_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Assembles an increment from explicit mode weights xi in lexicographic
/// (m, l, q) order, q fastest. Three successive contractions.
Lattice assemble_increment(const BasisTables& tables, double tau, std::span<const double> xi);

/// Draws M^3 Gaussians from `rng` in lexicographic order and assembles.
Lattice sample_increment(NoiseRng& rng, const BasisTables& tables, double tau);

/// Coarse increment n = sum of fine increments r n .. r n + r - 1.
std::vector<Lattice> coarsen_path(std::span<const Lattice> fine, std::size_t ratio);

/// Random-access sequence of increments driving one trajectory.
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  virtual std::size_t size() const = 0;
  virtual Lattice increment(std::size_t step) const = 0;
};

/// Increments generated on demand from (seed, path_id, step).
class SampledNoise final : public NoiseSource {
 public:
  SampledNoise(std::shared_ptr<const BasisTables> tables, double tau, const NoiseSpec& spec, std::size_t steps);

  std::size_t size() const override { return steps_; }
  Lattice increment(std::size_t step) const override;

 private:
  std::shared_ptr<const BasisTables> tables_;
  double tau_;
  NoiseSpec spec_;
  std::size_t steps_;
};

class RecordedNoise final : public NoiseSource {
 public:
  explicit RecordedNoise(std::vector<Lattice> increments) : increments_(std::move(increments)) {}

  std::size_t size() const override { return increments_.size(); }
  Lattice increment(std::size_t step) const override { return increments_.at(step); }
  const std::vector<Lattice>& increments() const { return increments_; }

 private:
  std::vector<Lattice> increments_;
};

/// Materializes every increment of a source.
std::vector<Lattice> record(const NoiseSource& source);

/// Binary replay file: magic "SMXNOISE", u32 version, u64 seed, u64 path_id,
/// u32 modes, f64 tau, u32 counts[3], u64 steps, then steps * I*J*K
/// little-endian f64 values in lattice order.
struct NoiseFileHeader {
  std::uint64_t seed = 0;
  std::uint64_t path_id = 0;
  std::uint32_t modes = 0;
  double tau = 0.0;
  Extents extents{};
};

inline constexpr std::uint32_t kNoiseFileVersion = 1;

void write_increments(const std::filesystem::path& path, const NoiseFileHeader& header,
                      std::span<const Lattice> increments);

struct NoiseFile {
  NoiseFileHeader header;
  std::vector<Lattice> increments;
};

NoiseFile read_increments(const std::filesystem::path& path);

}  // namespace smaxwell
