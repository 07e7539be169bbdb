#include "pprwatch/ppr_engine.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <type_traits>
#include <unordered_set>

#include "pprwatch/errors.hpp"

namespace pprwatch {

std::vector<SparseEntry> SparseVector::sorted_entries() const {
  std::vector<SparseEntry> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

double SparseVector::l1_norm() const {
  double total = 0.0;
  for (const auto& [id, v] : sorted_entries()) total += std::abs(v);
  return total;
}

double SparseVector::sum() const {
  double total = 0.0;
  for (const auto& [id, v] : sorted_entries()) total += v;
  return total;
}

PushState init_state(NodeId seed, double alpha, double epsilon) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInputError("alpha must be in (0,1)");
  if (!(epsilon > 0.0)) throw InvalidInputError("epsilon must be positive");
  PushState state;
  state.seed = seed;
  state.alpha = alpha;
  state.epsilon = epsilon;
  state.r.set(seed, 1.0);
  return state;
}

PushStats dynamic_push(PushState& state, const DynamicGraph& g, std::uint64_t max_transfers) {
  const double alpha = state.alpha;
  const double eps = state.epsilon;
  auto violates = [&](NodeId u, double ru) { return std::abs(ru) > eps * g.effective_degree(u); };

  std::deque<NodeId> queue;
  std::unordered_set<NodeId> queued;
  {
    std::vector<NodeId> initial;
    for (const auto& [u, ru] : state.r) {
      if (violates(u, ru)) initial.push_back(u);
    }
    std::sort(initial.begin(), initial.end());
    queue.assign(initial.begin(), initial.end());
    queued.insert(initial.begin(), initial.end());
  }

  PushStats stats;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    queued.erase(u);
    const double ru = state.r.get(u);
    if (!violates(u, ru)) continue;
    ++stats.pops;

    state.r.erase(u);
    if (g.is_dangling(u)) {
      state.p.add(u, ru);
      ++stats.transfers;
      continue;
    }
    state.p.add(u, alpha * ru);
    const double scale = (1.0 - alpha) * ru / g.degree_sum(u);
    for (const auto& [v, w] : g.neighbors(u)) {
      state.r.add(v, scale * w);
      if (!queued.contains(v) && violates(v, state.r.get(v))) {
        queue.push_back(v);
        queued.insert(v);
      }
    }
    stats.transfers += g.neighbors(u).size();
    if (stats.transfers > max_transfers) {
      throw PushDivergenceError("push for seed " + std::to_string(state.seed) + " exceeded " +
                                std::to_string(max_transfers) + " residual transfers");
    }
  }
  return stats;
}

std::vector<ArcChange> arc_changes(const EdgeEvent& e, const DynamicGraph& g_before) {
  std::vector<ArcChange> changes;
  changes.push_back({e.src, e.dst, e.delta_weight, g_before.degree_sum(e.src)});
  if (!g_before.directed()) {
    changes.push_back({e.dst, e.src, e.delta_weight, g_before.degree_sum(e.dst)});
  }
  return changes;
}

void adjust_for_arc(PushState& state, const ArcChange& change) {
  const double p_old = state.p.get(change.from);
  if (p_old == 0.0 || change.delta_weight == 0.0) return;
  const double alpha = state.alpha;

  if (change.degree_before > 0.0) {
    const double delta = p_old * change.delta_weight / change.degree_before;
    state.p.add(change.from, delta);
    state.r.add(change.from, -delta / alpha);
    state.r.add(change.to, delta * (1.0 - alpha) / alpha);
    return;
  }
  if (change.delta_weight < 0.0) {
    throw InternalInconsistencyError("seed " + std::to_string(state.seed) +
                                     ": weight decrease on dangling node " +
                                     std::to_string(change.from) + " carrying mass");
  }
  const double moved = (1.0 - alpha) / alpha * p_old;
  state.r.add(change.to, moved);
  state.r.add(change.from, -moved);
}

void adjust_for_event(PushState& state, const EdgeEvent& e, const DynamicGraph& g_before) {
  for (const auto& change : arc_changes(e, g_before)) adjust_for_arc(state, change);
}

PushStats increment_push(PushState& state, DynamicGraph& g, std::span<const EdgeEvent> events,
                         std::uint64_t max_transfers) {
  for (std::size_t i = 0; i < events.size(); ++i) {
    g.classify(events[i], i);
    adjust_for_event(state, events[i], g);
    g.apply_event(events[i], i);
  }
  return dynamic_push(state, g, max_transfers);
}

double residual_bound_excess(const PushState& state, const DynamicGraph& g) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& [u, ru] : state.r) {
    worst = std::max(worst, std::abs(ru) - state.epsilon * g.effective_degree(u));
  }
  return state.r.empty() ? 0.0 : worst;
}

// --- checkpoint -------------------------------------------------------------

namespace {

constexpr std::array<char, 8> kMagic = {'P', 'P', 'R', 'W', 'C', 'K', 'P', 'T'};

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

void put_f64(std::ostream& out, double value) { put_le(out, std::bit_cast<std::uint64_t>(value)); }

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw InvalidInputError("truncated checkpoint");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

void put_vector(std::ostream& out, const SparseVector& v) {
  const auto entries = v.sorted_entries();
  put_le<std::uint64_t>(out, entries.size());
  for (const auto& [id, value] : entries) {
    put_le<std::uint32_t>(out, id);
    put_f64(out, value);
  }
}

SparseVector get_vector(std::istream& in) {
  SparseVector v;
  const auto count = get_le<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto id = get_le<std::uint32_t>(in);
    v.set(id, get_f64(in));
  }
  return v;
}

}  // namespace

void save_checkpoint(std::ostream& out, std::span<const PushState> states) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kCheckpointVersion);
  put_le<std::uint32_t>(out, 0);
  put_le<std::uint64_t>(out, states.size());
  for (const auto& s : states) {
    put_le<std::uint32_t>(out, s.seed);
    put_f64(out, s.alpha);
    put_f64(out, s.epsilon);
    put_vector(out, s.p);
    put_vector(out, s.r);
  }
}

std::vector<PushState> load_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw InvalidInputError("not a push-state checkpoint");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw InvalidInputError("unsupported checkpoint version " + std::to_string(version));
  }
  get_le<std::uint32_t>(in);
  const auto count = get_le<std::uint64_t>(in);
  std::vector<PushState> states;
  states.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    PushState s;
    s.seed = get_le<std::uint32_t>(in);
    s.alpha = get_f64(in);
    s.epsilon = get_f64(in);
    s.p = get_vector(in);
    s.r = get_vector(in);
    states.push_back(std::move(s));
  }
  return states;
}

}  // namespace pprwatch
