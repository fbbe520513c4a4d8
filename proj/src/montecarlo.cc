#include "brokenstick/montecarlo.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace brokenstick {

std::string_view to_string(Construction c) {
  switch (c) {
    case Construction::kUniformCuts:
      return "uniform-cuts";
    case Construction::kExponentialRatio:
      return "exponential-ratio";
  }
  return "unknown";
}

Construction parse_construction(std::string_view name) {
  if (name == "uniform-cuts") return Construction::kUniformCuts;
  if (name == "exponential-ratio") return Construction::kExponentialRatio;
  throw std::invalid_argument("unknown construction '" + std::string(name) +
                              "' (expected uniform-cuts or exponential-ratio)");
}

void SimConfig::validate() const {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (chunk_size < 1) throw std::invalid_argument("chunk_size must be >= 1");
}

namespace {

// Runs fn(rng, chunk_samples) for every chunk, spreading chunks over threads.
// Results come back indexed by chunk so reductions are order-fixed.
template <typename Result>
std::vector<Result> run_chunks(
    const SimConfig& config,
    const std::function<Result(Rng&, std::uint64_t)>& fn) {
  config.validate();
  const std::uint64_t chunks =
      (config.samples + config.chunk_size - 1) / config.chunk_size;
  std::vector<Result> results(chunks);

  unsigned threads = config.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::uint64_t c = next++; c < chunks; c = next++) {
        const std::uint64_t first = c * config.chunk_size;
        const std::uint64_t count =
            std::min(config.chunk_size, config.samples - first);
        Rng rng(config.seed, c);
        results[c] = fn(rng, count);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

struct Moments {
  double sum = 0.0;
  double sum_squares = 0.0;
  std::uint64_t count = 0;

  void add(double v) {
    sum += v;
    sum_squares += v * v;
    ++count;
  }
  void merge(const Moments& other) {
    sum += other.sum;
    sum_squares += other.sum_squares;
    count += other.count;
  }
  Estimate estimate() const {
    Estimate e;
    e.count = count;
    if (count == 0) return e;
    const double c = static_cast<double>(count);
    e.value = sum / c;
    if (count > 1) {
      const double variance =
          std::max(0.0, (sum_squares - c * e.value * e.value) / (c - 1.0));
      e.se = std::sqrt(variance / c);
    }
    return e;
  }
};

void check_grid(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("evaluation grid is empty");
  if (!std::is_sorted(xs.begin(), xs.end())) {
    throw std::invalid_argument("evaluation grid must be ascending");
  }
}

}  // namespace

SortedDivision sample_division_uniform(FieldSize n, Rng& rng) {
  const int size = n.value();
  SortedDivision out;
  out.segments.resize(size);
  if (size == 1) {
    out.segments[0] = 1.0;
    return out;
  }
  std::vector<double> cuts(size - 1);
  for (;;) {
    for (double& c : cuts) c = rng.uniform();
    std::sort(cuts.begin(), cuts.end());
    // Coinciding cuts (or a cut at 0) would leave a zero-length segment.
    bool degenerate = cuts.front() == 0.0;
    for (int i = 1; i < size - 1 && !degenerate; ++i) {
      degenerate = cuts[i] == cuts[i - 1];
    }
    if (!degenerate) break;
  }
  double previous = 0.0;
  for (int i = 0; i < size - 1; ++i) {
    out.segments[i] = cuts[i] - previous;
    previous = cuts[i];
  }
  out.segments[size - 1] = 1.0 - previous;
  std::sort(out.segments.begin(), out.segments.end(), std::greater<>());
  return out;
}

SortedDivision sample_division_exponential(FieldSize n, Rng& rng) {
  const int size = n.value();
  SortedDivision out;
  out.segments.resize(size);
  if (size == 1) {
    out.segments[0] = 1.0;
    return out;
  }
  double total = 0.0;
  for (;;) {
    total = 0.0;
    bool degenerate = false;
    for (double& x : out.segments) {
      x = rng.exponential();
      degenerate = degenerate || x == 0.0;
      total += x;
    }
    if (!degenerate) break;
  }
  for (double& x : out.segments) x /= total;
  std::sort(out.segments.begin(), out.segments.end(), std::greater<>());
  return out;
}

SortedDivision sample_division(FieldSize n, Construction construction,
                               Rng& rng) {
  return construction == Construction::kUniformCuts
             ? sample_division_uniform(n, rng)
             : sample_division_exponential(n, rng);
}

RaceDraw sample_race(FieldSize n, Rng& rng, Construction construction) {
  RaceDraw draw{sample_division(n, construction, rng), Rank(1)};
  const double point = rng.uniform();
  double cumulative = 0.0;
  int winner = n.value();  // rounding can leave the point past the last sum
  for (int i = 0; i < n.value(); ++i) {
    cumulative += draw.division.segments[i];
    if (point < cumulative) {
      winner = i + 1;
      break;
    }
  }
  draw.winner_rank = Rank(winner);
  return draw;
}

double Estimate::gap_in_se(double reference) const {
  const double gap = std::abs(value - reference);
  if (gap == 0.0) return 0.0;
  double scale = se;
  if (scale == 0.0) scale = count > 0 ? 1.0 / static_cast<double>(count) : 0.0;
  return scale > 0.0 ? gap / scale : INFINITY;
}

Estimate proportion_estimate(std::uint64_t hits, std::uint64_t count) {
  Estimate e;
  e.count = count;
  if (count == 0) return e;
  const double c = static_cast<double>(count);
  e.value = static_cast<double>(hits) / c;
  e.se = std::sqrt(e.value * (1.0 - e.value) / c);
  return e;
}

std::vector<std::vector<Estimate>> estimate_ccdf_all_ranks(
    FieldSize n, const std::vector<std::vector<double>>& grids,
    const SimConfig& config) {
  const int size = n.value();
  if (grids.size() != static_cast<std::size_t>(size)) {
    throw std::invalid_argument("need one grid per rank");
  }
  for (const auto& g : grids) check_grid(g);

  // positions[k][i] counts draws whose z_(k) exceeds exactly the first i grid
  // points; survival counts follow by suffix sums.
  using Positions = std::vector<std::vector<std::uint64_t>>;
  const auto chunk_results = run_chunks<Positions>(
      config, [&](Rng& rng, std::uint64_t count) {
        Positions positions(size);
        for (int k = 0; k < size; ++k) positions[k].assign(grids[k].size() + 1, 0);
        for (std::uint64_t s = 0; s < count; ++s) {
          const auto division = sample_division(n, config.construction, rng);
          for (int k = 0; k < size; ++k) {
            const auto& grid = grids[k];
            const double z = division.segments[k];
            const auto below = std::lower_bound(grid.begin(), grid.end(), z) -
                               grid.begin();
            ++positions[k][below];
          }
        }
        return positions;
      });

  std::vector<std::vector<Estimate>> out(size);
  for (int k = 0; k < size; ++k) {
    const std::size_t points = grids[k].size();
    std::vector<std::uint64_t> positions(points + 1, 0);
    for (const auto& chunk : chunk_results) {
      for (std::size_t i = 0; i <= points; ++i) positions[i] += chunk[k][i];
    }
    out[k].resize(points);
    std::uint64_t above = 0;
    for (std::size_t i = points; i-- > 0;) {
      above += positions[i + 1];
      out[k][i] = proportion_estimate(above, config.samples);
    }
  }
  return out;
}

std::vector<Estimate> estimate_ccdf(FieldSize n, Rank k,
                                    std::span<const double> xs,
                                    const SimConfig& config) {
  if (k.value() > n.value()) {
    throw std::invalid_argument("rank exceeds field size");
  }
  check_grid(xs);
  // Other ranks get a single dummy point; their counts are discarded.
  std::vector<std::vector<double>> grids(n.value(), std::vector<double>{0.0});
  grids[k.value() - 1].assign(xs.begin(), xs.end());
  auto all = estimate_ccdf_all_ranks(n, grids, config);
  return std::move(all[k.value() - 1]);
}

RaceSimulation simulate_races(FieldSize n, const SimConfig& config) {
  const int size = n.value();
  struct Partial {
    std::vector<Moments> length;
    std::vector<Moments> squared_length;
    std::vector<Moments> length_given_win;
    Moments winner;
  };
  auto empty_partial = [size] {
    return Partial{std::vector<Moments>(size), std::vector<Moments>(size),
                   std::vector<Moments>(size), {}};
  };
  const auto chunk_results =
      run_chunks<Partial>(config, [&](Rng& rng, std::uint64_t count) {
        Partial p = empty_partial();
        for (std::uint64_t s = 0; s < count; ++s) {
          const auto draw = sample_race(n, rng, config.construction);
          for (int k = 0; k < size; ++k) {
            const double z = draw.division.segments[k];
            p.length[k].add(z);
            p.squared_length[k].add(z * z);
          }
          const int w = draw.winner_rank.value() - 1;
          const double won = draw.division.segments[w];
          p.length_given_win[w].add(won);
          p.winner.add(won);
        }
        return p;
      });

  Partial total = empty_partial();
  for (const auto& chunk : chunk_results) {
    for (int k = 0; k < size; ++k) {
      total.length[k].merge(chunk.length[k]);
      total.squared_length[k].merge(chunk.squared_length[k]);
      total.length_given_win[k].merge(chunk.length_given_win[k]);
    }
    total.winner.merge(chunk.winner);
  }

  RaceSimulation sim;
  sim.field_size = size;
  sim.races = config.samples;
  for (int k = 0; k < size; ++k) {
    sim.mean.push_back(total.length[k].estimate());
    sim.second_moment.push_back(total.squared_length[k].estimate());
    sim.win_probability.push_back(
        proportion_estimate(total.length_given_win[k].count, config.samples));
    sim.conditional_mean.push_back(total.length_given_win[k].estimate());
  }
  sim.winner_segment_mean = total.winner.estimate();
  return sim;
}

std::vector<double> sample_order_statistic(FieldSize n, Rank k,
                                           const SimConfig& config) {
  if (k.value() > n.value()) {
    throw std::invalid_argument("rank exceeds field size");
  }
  const auto chunks = run_chunks<std::vector<double>>(
      config, [&](Rng& rng, std::uint64_t count) {
        std::vector<double> values;
        values.reserve(count);
        for (std::uint64_t s = 0; s < count; ++s) {
          values.push_back(
              sample_division(n, config.construction, rng).kth_largest(k));
        }
        return values;
      });
  std::vector<double> out;
  out.reserve(config.samples);
  for (const auto& c : chunks) out.insert(out.end(), c.begin(), c.end());
  return out;
}

}  // namespace brokenstick
