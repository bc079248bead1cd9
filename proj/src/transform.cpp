#include <fftw3.h>

#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "torusns/errors.hpp"
#include "torusns/spectral.hpp"

namespace torusns {
namespace {

// FFTW planning is not thread-safe; execution on fresh arrays through the
// new-array interface is. Plans live for the lifetime of the process.
class PlanCache {
 public:
  fftw_plan get(int dimension, int size, int howmany, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(dimension, size, howmany, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::vector<int> dims(static_cast<std::size_t>(dimension), size);
    std::size_t total = static_cast<std::size_t>(howmany);
    for (int d = 0; d < dimension; ++d) total *= static_cast<std::size_t>(size);
    auto* scratch = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    fftw_plan plan = fftw_plan_many_dft(dimension, dims.data(), howmany, scratch, nullptr, howmany, 1,
                                        scratch, nullptr, howmany, 1, sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw Error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

void execute(std::vector<Complex>& data, int dimension, int size, int howmany, int sign) {
  fftw_plan plan = plan_cache().get(dimension, size, howmany, sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

std::size_t grid_index(std::span<const int> xi, int size) {
  std::size_t idx = 0;
  for (int v : xi) {
    int w = v % size;
    if (w < 0) w += size;
    idx = idx * static_cast<std::size_t>(size) + static_cast<std::size_t>(w);
  }
  return idx;
}

void require_resolved(int size, int cutoff) {
  if (size < 2 * cutoff + 1) {
    throw AliasingError("grid size " + std::to_string(size) + " cannot resolve cutoff " +
                        std::to_string(cutoff) + " (need N >= 2K+1)");
  }
}

}  // namespace

int fft_friendly_size(int minimum) {
  for (int n = std::max(minimum, 1);; ++n) {
    int r = n;
    for (int p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return n;
  }
}

int default_grid_size(int cutoff) { return fft_friendly_size(3 * cutoff + 1); }

GridField to_physical(const FourierField& g, int grid_size) {
  const Lattice& lat = g.lattice();
  require_resolved(grid_size, lat.cutoff());
  const int n = lat.dimension();
  const int c = g.components();
  GridField out(n, grid_size, c);
  std::vector<Complex> buf(out.values.size());
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const std::size_t gi = grid_index(lat.mode(i), grid_size);
    for (int k = 0; k < c; ++k) buf[gi * static_cast<std::size_t>(c) + static_cast<std::size_t>(k)] = g.at(i, k);
  }
  execute(buf, n, grid_size, c, FFTW_BACKWARD);
  for (std::size_t i = 0; i < buf.size(); ++i) out.values[i] = buf[i].real();
  return out;
}

FourierField from_physical(const GridField& values, int cutoff) {
  require_resolved(values.size, cutoff);
  const int n = values.dimension;
  const int c = values.components;
  std::vector<Complex> buf(values.values.begin(), values.values.end());
  execute(buf, n, values.size, c, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(values.points());
  Lattice lat(n, cutoff);
  FourierField out(lat, c);
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const std::size_t gi = grid_index(lat.mode(i), values.size);
    for (int k = 0; k < c; ++k) {
      out.at(i, k) = scale * buf[gi * static_cast<std::size_t>(c) + static_cast<std::size_t>(k)];
    }
  }
  // Real input: enforce exact Hermitian pairing against FFT round-off.
  out.symmetrize();
  return out;
}

double grid_mean_product(const GridField& a, const GridField& b) {
  if (a.values.size() != b.values.size()) throw LatticeMismatch("grid fields differ in shape");
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    s += static_cast<long double>(a.values[i]) * b.values[i];
  }
  return static_cast<double>(s / static_cast<long double>(a.points()));
}

}  // namespace torusns
