#include "tdirac/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace tdirac::fft {
namespace {

struct PlanKey {
  std::vector<int> dims;
  int howmany;
  int direction;
  auto operator<=>(const PlanKey&) const = default;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(const PlanKey& key) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    const int total = std::accumulate(key.dims.begin(), key.dims.end(), 1,
                                      std::multiplies<>());
    auto* buf = fftw_alloc_complex(static_cast<std::size_t>(total) * key.howmany);
    fftw_plan plan = fftw_plan_many_dft(
        static_cast<int>(key.dims.size()), key.dims.data(), key.howmany, buf,
        nullptr, 1, total, buf, nullptr, 1, total,
        key.direction < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    if (plan == nullptr) throw std::runtime_error("fftw plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void transform(std::span<Complex> data, std::span<const int> dims, int howmany,
               int direction) {
  if (dims.empty()) throw std::invalid_argument("fft: empty shape");
  std::size_t total = 1;
  for (int n : dims) {
    if (n < 1) throw std::invalid_argument("fft: non-positive extent");
    total *= static_cast<std::size_t>(n);
  }
  if (data.size() != total * static_cast<std::size_t>(howmany)) {
    throw std::invalid_argument("fft: buffer size does not match shape");
  }
  PlanKey key{std::vector<int>(dims.begin(), dims.end()), howmany, direction};
  fftw_plan plan = cache().get(key);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace tdirac::fft
