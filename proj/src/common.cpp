#include "tomo/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>
#include <vector>

namespace tomo {

const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

double real_checked(Complex z, double tol, const char* what) {
  if (std::abs(z.imag()) > tol) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s: imaginary residue %.3e exceeds %.3e",
                  what, std::abs(z.imag()), tol);
    throw ValidationError(buf);
  }
  return z.real();
}

int max_threads() {
  if (const char* env = std::getenv("TOMO_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  int nt = std::min(max_threads(), n);
  if (nt <= 1 || n < 4) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += nt) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

}  // namespace tomo
