#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>

#include "partmod/density.hpp"
#include "partmod/periodicity.hpp"
#include "partmod/residue_engine.hpp"
#include "partmod/sequences.hpp"

// On-disk cache of residue windows, keyed by (sequence spec, k, modulus,
// length). A request is served from an exact-length file, from any longer
// file for the same parameters (windows are prefixes of each other), or by
// computing and storing. Files are written to a temp name and renamed into
// place, so concurrent processes only ever observe complete files.

namespace partmod {

class WindowCache {
 public:
  explicit WindowCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
  }

  const std::filesystem::path& dir() const { return dir_; }

  static std::string file_name(const std::string& seq_spec, std::uint32_t k, std::uint32_t m,
                               std::uint64_t length) {
    std::string safe;
    safe.reserve(seq_spec.size());
    for (char c : seq_spec) {
      if (c == ':')
        safe += '-';
      else if (c == ',')
        safe += '.';
      else
        safe += c;
    }
    return safe + "_k" + std::to_string(k) + "_m" + std::to_string(m) + "_L" +
           std::to_string(length) + ".pmw";
  }

  std::optional<ResidueWindow> try_load(const std::string& seq_spec, std::uint32_t k,
                                        std::uint32_t m, std::uint64_t length) const {
    const auto exact = dir_ / file_name(seq_spec, k, m, length);
    if (auto w = read_file(exact, length)) return w;

    // Any longer stored window with the same parameters serves a prefix.
    const std::string prefix = file_name(seq_spec, k, m, 0);
    const std::string_view stem(prefix.data(), prefix.size() - std::string("0.pmw").size());
    std::uint64_t best = 0;
    std::filesystem::path best_path;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir_, ec)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind(stem, 0) != 0 || name.size() <= stem.size() + 4) continue;
      if (name.substr(name.size() - 4) != ".pmw") continue;
      std::uint64_t stored = 0;
      try {
        stored = std::stoull(name.substr(stem.size(), name.size() - stem.size() - 4));
      } catch (...) {
        continue;
      }
      if (stored >= length && (best == 0 || stored < best)) {
        best = stored;
        best_path = entry.path();
      }
    }
    if (best == 0) return std::nullopt;
    return read_file(best_path, length);
  }

  void store(const ResidueWindow& window) const {
    const auto target = dir_ / file_name(window.seq_spec(), window.k(), window.modulus(),
                                         window.size());
    if (std::filesystem::exists(target)) return;
    static std::mt19937_64 rng{std::random_device{}()};
    const auto tmp = target.string() + ".tmp." + std::to_string(rng());
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) return;  // cache is best-effort
      window.write(os);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) std::filesystem::remove(tmp, ec);
  }

  ResidueWindow get_or_compute(const PartSequence& seq, std::uint32_t k, std::uint32_t m,
                               std::uint64_t length, const ComputeOptions& opts = {}) const {
    if (auto cached = try_load(seq.spec(), k, m, length)) return std::move(*cached);
    ResidueWindow window = compute_residues(seq, k, m, length, opts);
    store(window);
    return window;
  }

 private:
  static std::optional<ResidueWindow> read_file(const std::filesystem::path& path,
                                                std::uint64_t length) {
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    try {
      ResidueWindow w = ResidueWindow::read(is, length);
      if (w.size() < length) return std::nullopt;
      return w;
    } catch (...) {
      return std::nullopt;  // damaged cache entries are ignored
    }
  }

  std::filesystem::path dir_;
};

// Density report that pulls its window through the cache when one is given
// (cache == nullptr computes from scratch); the tally itself is the same
// code either way.
inline DensityReport cached_density_report(const PartSequence& seq, std::uint32_t k,
                                           std::uint32_t m, const ComputeOptions& opts,
                                           const WindowCache* cache, bool pair_checks = false) {
  if (!cache) return density_report(seq, k, m, opts, pair_checks);
  const PeriodCert cert = fundamental_period(seq, k, m);
  const std::uint64_t T =
      detail::require_window_length(cert.fundamental_period, m, opts, "density_report");
  return density_report_from_window(seq, k, m, cache->get_or_compute(seq, k, m, T, opts), opts,
                                    pair_checks);
}

}  // namespace partmod
