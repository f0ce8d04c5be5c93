#pragma once

// Embedding countable metric presentations into the binary sequence space:
// an epsilon schedule of the form q*sqrt(2)/2^n (irrational, hence never
// equal to any rational distance, which keeps every ball clopen), a scheme
// tree of cells refined by ball-chopping, complete prefix codes on siblings
// so the image realizes every prefix the census can support, the xor
// translation that steers the image clear of the endpoint set, and a
// first-fit order embedding of the translated points into the rationals.

#include <json.hpp>

#include <map>
#include <memory>
#include <queue>

#include "ordtop/backforth.hpp"
#include "ordtop/cantor.hpp"
#include "ordtop/enumerate.hpp"
#include "ordtop/setdsl_parser.hpp"

namespace ordtop {

struct invalid_metric : std::domain_error {
  using std::domain_error::domain_error;
};

struct isolated_point_witness : std::domain_error {
  std::size_t id;
  explicit isolated_point_witness(std::size_t id_, const std::string& label)
      : std::domain_error("isolated point at census scale: id " + std::to_string(id_) +
                          (label.empty() ? "" : " (" + label + ")")),
        id(id_) {}
};

struct MetricPresentation {
  std::optional<std::size_t> count;  // nullopt: infinitely many points
  std::function<Rational(std::size_t, std::size_t)> metric;
  std::function<std::string(std::size_t)> label;
  std::string name;
};

// --- built-in spaces ----------------------------------------------------------

inline MetricPresentation q01_space() {
  auto pts = enum_rationals().filter([](const Rational& q) { return q > 0 && q < 1; });
  return MetricPresentation{
      std::nullopt,
      [pts](std::size_t i, std::size_t j) {
        Rational d = *pts.at(i) - *pts.at(j);
        return d < 0 ? Rational(-d) : d;
      },
      [pts](std::size_t i) { return rat_to_string(*pts.at(i)); }, "Q01"};
}

inline MetricPresentation endpoint_space() {
  auto pts = enumerate_members(parse_set("E"));
  return MetricPresentation{
      std::nullopt,
      [pts](std::size_t i, std::size_t j) {
        Rational d = *pts.at(i) - *pts.at(j);
        return d < 0 ? Rational(-d) : d;
      },
      [pts](std::size_t i) { return rat_to_string(*pts.at(i)); }, "E"};
}

inline MetricPresentation qxq_space() {
  auto base = enum_rationals();
  auto coord = [base](std::size_t k) {
    auto [i, j] = detail::cantor_unpair(k);
    return std::pair<Rational, Rational>{*base.at(i), *base.at(j)};
  };
  return MetricPresentation{
      std::nullopt,
      [coord](std::size_t i, std::size_t j) {
        auto [x1, y1] = coord(i);
        auto [x2, y2] = coord(j);
        Rational dx = x1 - x2, dy = y1 - y2;
        if (dx < 0) dx = -dx;
        if (dy < 0) dy = -dy;
        return dx < dy ? dy : dx;
      },
      [coord](std::size_t k) {
        auto [x, y] = coord(k);
        return "(" + rat_to_string(x) + "," + rat_to_string(y) + ")";
      },
      "QxQ"};
}

inline MetricPresentation integer_space() {
  auto pts = enum_integers();
  return MetricPresentation{
      std::nullopt,
      [pts](std::size_t i, std::size_t j) {
        Rational d = *pts.at(i) - *pts.at(j);
        return d < 0 ? Rational(-d) : d;
      },
      [pts](std::size_t i) { return rat_to_string(*pts.at(i)); }, "Z"};
}

// {"points": ["a", "b", ...], "metric": [["0", "1/2"], ["1/2", "0"]]}
inline MetricPresentation load_space(const nlohmann::json& j, std::string name = "custom") {
  auto labels = std::make_shared<std::vector<std::string>>(
      j.at("points").get<std::vector<std::string>>());
  auto rows = j.at("metric").get<std::vector<std::vector<std::string>>>();
  if (rows.size() != labels->size())
    throw invalid_metric("metric matrix must be square with one row per point");
  auto matrix = std::make_shared<std::vector<std::vector<Rational>>>();
  for (const auto& row : rows) {
    if (row.size() != labels->size())
      throw invalid_metric("metric matrix must be square with one row per point");
    std::vector<Rational> r;
    for (const auto& cell : row) r.push_back(parse_rational(cell));
    matrix->push_back(std::move(r));
  }
  return MetricPresentation{
      labels->size(),
      [matrix](std::size_t i, std::size_t j2) { return (*matrix)[i][j2]; },
      [labels](std::size_t i) { return (*labels)[i]; }, std::move(name)};
}

// Symmetry, zero exactly on the diagonal, triangle inequality - spot-checked
// on sampled triples; violations are hard errors.
inline void validate_metric(const MetricPresentation& m, std::size_t sample) {
  if (m.count) sample = std::min(sample, *m.count);
  for (std::size_t i = 0; i < sample; ++i) {
    if (m.metric(i, i) != 0)
      throw invalid_metric("metric is nonzero on the diagonal at id " + std::to_string(i));
    for (std::size_t j = i + 1; j < sample; ++j) {
      Rational dij = m.metric(i, j);
      if (dij != m.metric(j, i))
        throw invalid_metric("metric is not symmetric at ids " + std::to_string(i) + "," +
                             std::to_string(j));
      if (dij <= 0)
        throw invalid_metric("metric vanishes off the diagonal at ids " + std::to_string(i) +
                             "," + std::to_string(j));
      for (std::size_t k = 0; k < sample; k += 3)
        if (dij > m.metric(i, k) + m.metric(k, j))
          throw invalid_metric("triangle inequality fails at ids " + std::to_string(i) + "," +
                               std::to_string(j) + "," + std::to_string(k));
    }
  }
}

// --- epsilon schedule -----------------------------------------------------------

// eps_n = s * sqrt(2) / 2^n with s rational: strictly decreasing, tending to
// zero, and irrational, hence never equal to any rational distance.
struct EpsilonSchedule {
  Rational scale;

  Quad value(std::size_t n) const {
    return Quad{0, scale / Rational(pow_rat(Rational(2), static_cast<unsigned>(n)))};
  }
  Stream<Quad> values() const {
    Rational s = scale;
    return Stream<Quad>::from_indexed([s](std::size_t i) -> std::optional<Quad> {
      EpsilonSchedule tmp{s};
      return tmp.value(i + 1);
    });
  }
};

// The scale is the first sampled positive distance; eps_1 = s*sqrt(2)/2 < s
// already sits below it.
inline EpsilonSchedule select_epsilons(const MetricPresentation& m, std::size_t count) {
  if (count < 1) throw std::domain_error("select_epsilons: count must be >= 1");
  std::size_t limit = m.count ? *m.count : 64;
  for (std::size_t k = 1; k < limit; ++k) {
    Rational d = m.metric(0, k);
    if (d > 0) return EpsilonSchedule{d};
    if (d < 0) throw invalid_metric("negative distance");
  }
  throw invalid_metric("degenerate metric: all sampled distances are zero");
}

// --- the scheme -----------------------------------------------------------------

namespace detail {

// Size-weighted Huffman lengths with deterministic tie-breaking, then
// canonical code assignment. Sibling cells with many points get short words,
// stragglers get long ones; the words always form a complete prefix code
// (Kraft sum exactly 1), so every binary word is comparable with a cell.
inline std::vector<std::vector<bool>> complete_code(const std::vector<std::size_t>& sizes) {
  std::size_t k = sizes.size();
  if (k == 1) return {{}};
  struct Node {
    std::size_t weight, order;
    int left = -1, right = -1;
  };
  std::vector<Node> nodes;
  auto cmp = [&nodes](int a, int b) {
    if (nodes[a].weight != nodes[b].weight) return nodes[a].weight > nodes[b].weight;
    return nodes[a].order > nodes[b].order;
  };
  std::priority_queue<int, std::vector<int>, decltype(cmp)> heap(cmp);
  for (std::size_t i = 0; i < k; ++i) {
    nodes.push_back({sizes[i], i});
    heap.push(static_cast<int>(i));
  }
  while (heap.size() > 1) {
    int a = heap.top();
    heap.pop();
    int b = heap.top();
    heap.pop();
    nodes.push_back({nodes[a].weight + nodes[b].weight, nodes.size(), a, b});
    heap.push(static_cast<int>(nodes.size() - 1));
  }
  std::vector<std::size_t> lengths(k, 0);
  // depth-first from the root
  std::vector<std::pair<int, std::size_t>> stack{{heap.top(), 0}};
  while (!stack.empty()) {
    auto [n, depth] = stack.back();
    stack.pop_back();
    if (nodes[n].left < 0) {
      lengths[nodes[n].order] = depth == 0 ? 1 : depth;  // k == 1 never reaches here
      continue;
    }
    stack.push_back({nodes[n].left, depth + 1});
    stack.push_back({nodes[n].right, depth + 1});
  }
  // canonical assignment: by (length, piece order), lexicographically increasing
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&lengths](std::size_t a, std::size_t b) {
    if (lengths[a] != lengths[b]) return lengths[a] < lengths[b];
    return a < b;
  });
  std::vector<std::vector<bool>> codes(k);
  std::size_t code = 0, prev_len = lengths[order[0]];
  for (std::size_t idx = 0; idx < k; ++idx) {
    std::size_t i = order[idx];
    code <<= (lengths[i] - prev_len);
    prev_len = lengths[i];
    std::vector<bool> word(lengths[i]);
    for (std::size_t b = 0; b < lengths[i]; ++b)
      word[b] = (code >> (lengths[i] - 1 - b)) & 1u;
    codes[i] = std::move(word);
    ++code;
  }
  return codes;
}

}  // namespace detail

class CantorScheme {
 public:
  struct Cell {
    std::vector<std::size_t> members;  // census point ids
    std::vector<bool> code;            // full path code from the root
    std::size_t parent;                // index into the previous level
  };

  CantorScheme(MetricPresentation m, std::size_t census, EpsilonSchedule eps)
      : impl_(std::make_shared<Impl>()) {
    impl_->m = std::move(m);
    impl_->census = census;
    impl_->eps = eps;
    Cell root;
    root.parent = 0;
    for (std::size_t i = 0; i < census; ++i) root.members.push_back(i);
    impl_->levels.push_back({root});
    impl_->id2cell.push_back(std::vector<std::size_t>(census, 0));
  }

  std::size_t census() const { return impl_->census; }
  std::size_t depth_built() const { return impl_->levels.size() - 1; }

  const std::vector<Cell>& level(std::size_t l) const {
    ensure_depth(l);
    return impl_->levels[l];
  }

  const EpsilonSchedule& epsilons() const { return impl_->eps; }

  // Code of the cell containing id at tree level l.
  const std::vector<bool>& code_at(std::size_t id, std::size_t l) const {
    ensure_depth(l);
    return cell_of(id, l).code;
  }

  // The infinite code word of a census point: descend the cell tree, extending
  // lazily as the scheme deepens; once the point sits alone in its cell the
  // word continues with zeros.
  CantorPoint embed_point(std::size_t id) const {
    if (id >= impl_->census) throw std::domain_error("embed_point: unknown id");
    auto impl = impl_;
    return CantorPoint::from_generator([impl, id](std::size_t i) -> bool {
      std::size_t l = impl->levels.size() - 1;
      while (CantorScheme::code_of(*impl, id, l).size() <= i) {
        if (CantorScheme::cell_static(*impl, id, l).members.size() == 1) return false;
        CantorScheme::grow(*impl);
        ++l;
      }
      return CantorScheme::code_of(*impl, id, l)[i];
    });
  }

 private:
  struct Impl {
    MetricPresentation m;
    std::size_t census = 0;
    EpsilonSchedule eps;
    std::vector<std::vector<Cell>> levels;
    std::vector<std::vector<std::size_t>> id2cell;  // per level: id -> cell index
    std::map<std::pair<std::size_t, std::size_t>, Rational> dcache;
  };

  static const Rational& dist(Impl& impl, std::size_t i, std::size_t j) {
    auto key = i < j ? std::pair{i, j} : std::pair{j, i};
    auto it = impl.dcache.find(key);
    if (it != impl.dcache.end()) return it->second;
    return impl.dcache.emplace(key, impl.m.metric(key.first, key.second)).first->second;
  }

  static const std::vector<bool>& code_of(Impl& impl, std::size_t id, std::size_t l) {
    return cell_static(impl, id, l).code;
  }

  static const Cell& cell_static(Impl& impl, std::size_t id, std::size_t l) {
    return impl.levels[l][impl.id2cell[l][id]];
  }

  const Cell& cell_of(std::size_t id, std::size_t l) const {
    return cell_static(*impl_, id, l);
  }

  void ensure_depth(std::size_t l) const {
    while (impl_->levels.size() <= l) grow(*impl_);
  }

  // Build the next level: split every multi-point cell by chopping it with
  // balls around first-enumerated points, at a scale two steps finer than the
  // level so child diameters stay below eps_level; assign sibling code words
  // as a complete prefix code weighted by cell size.
  static void grow(Impl& impl) {
    std::size_t next_level = impl.levels.size();
    const std::vector<Cell>& prev = impl.levels.back();
    std::vector<Cell> next;
    for (std::size_t ci = 0; ci < prev.size(); ++ci) {
      const Cell& cell = prev[ci];
      if (cell.members.size() == 1) {
        Cell kept = cell;
        kept.parent = ci;
        next.push_back(std::move(kept));
        continue;
      }
      std::size_t scale = next_level + 1;
      std::vector<std::vector<std::size_t>> pieces;
      for (std::size_t advance = 0;; ++advance) {
        if (advance > 512)
          throw invalid_metric("cell refuses to split: distinct points at distance zero?");
        pieces.clear();
        Quad radius = impl.eps.value(scale + advance);
        std::vector<std::size_t> rest = cell.members;
        while (!rest.empty()) {
          std::size_t p = rest.front();
          std::vector<std::size_t> ball, remain;
          for (std::size_t q : rest) {
            if (Quad(dist(impl, p, q)) < radius)
              ball.push_back(q);
            else
              remain.push_back(q);
          }
          pieces.push_back(std::move(ball));
          rest = std::move(remain);
        }
        if (pieces.size() >= 2) break;
      }
      std::vector<std::size_t> sizes;
      for (const auto& piece : pieces) sizes.push_back(piece.size());
      auto codes = detail::complete_code(sizes);
      for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
        Cell child;
        child.members = std::move(pieces[pi]);
        child.code = cell.code;
        child.code.insert(child.code.end(), codes[pi].begin(), codes[pi].end());
        child.parent = ci;
        next.push_back(std::move(child));
      }
    }
    std::vector<std::size_t> index(impl.census, 0);
    for (std::size_t ci = 0; ci < next.size(); ++ci)
      for (std::size_t id : next[ci].members) index[id] = ci;
    impl.levels.push_back(std::move(next));
    impl.id2cell.push_back(std::move(index));
  }

  std::shared_ptr<Impl> impl_;
};

// Census-scale hypothesis check: every checked point needs a census neighbor
// within the coarsest ball of the schedule.
inline void check_no_isolated(const MetricPresentation& m, const EpsilonSchedule& eps,
                              std::size_t census, std::size_t check_n) {
  Quad eps1 = eps.value(1);
  for (std::size_t i = 0; i < check_n; ++i) {
    bool near = false;
    for (std::size_t j = 0; j < census && !near; ++j) {
      if (j == i) continue;
      near = Quad(m.metric(i, j)) < eps1;
    }
    if (!near) throw isolated_point_witness(i, m.label ? m.label(i) : "");
  }
}

// Scheme over the first `census` points, refined to `depth` levels (deeper on
// demand). check_n bounds the isolated-point hypothesis check.
inline CantorScheme build_scheme(const MetricPresentation& m, std::size_t depth,
                                 std::size_t census,
                                 std::optional<std::size_t> check_n = std::nullopt) {
  std::size_t n = census;
  if (m.count) n = std::min(n, *m.count);
  if (n == 0) throw std::domain_error("build_scheme: empty census");
  validate_metric(m, std::min<std::size_t>(n, 24));
  EpsilonSchedule eps = select_epsilons(m, depth + 2);
  check_no_isolated(m, eps, n, std::min(check_n.value_or(n), n));
  CantorScheme scheme(m, n, eps);
  scheme.level(depth);  // materialize
  return scheme;
}

inline CantorPoint embed_eval(const CantorScheme& s, std::size_t id) {
  return s.embed_point(id);
}

// --- the full pipeline ----------------------------------------------------------

struct SierpinskiRow {
  std::size_t id;
  std::string label;
  Rational value;
};

struct SierpinskiResult {
  std::vector<SierpinskiRow> rows;          // first n_points ids, in id order
  std::vector<CantorPoint> images;          // raw scheme images of those ids
  std::vector<CantorPoint> translated;      // after the xor translation
  CantorPoint translation;                  // the translating point itself
  std::shared_ptr<CantorScheme> scheme;
  std::size_t census = 0;
};

struct CantorLexLess {
  bool operator()(const CantorPoint& x, const CantorPoint& y) const {
    for (std::size_t i = 0; i < (1u << 20); ++i) {
      bool bx = x.bit(i), by = y.bit(i);
      if (bx != by) return by;  // 0 before 1
    }
    throw std::logic_error("lexicographic comparison: streams agree to depth 2^20");
  }
};

inline constexpr std::size_t kPipelineCensus = 512;

// Embed, translate off the endpoint set, order lexicographically, and push
// into the rationals with first-fit witnesses.
inline SierpinskiResult run_sierpinski_pipeline(const MetricPresentation& m,
                                                std::size_t n_points, std::size_t depth,
                                                std::size_t budget) {
  if (n_points == 0) throw std::domain_error("sierpinski_map: need n_points >= 1");
  std::size_t census = std::max(n_points, kPipelineCensus);
  if (m.count) census = std::min(census, *m.count);
  if (census < n_points) throw std::domain_error("sierpinski_map: space has too few points");

  auto scheme = std::make_shared<CantorScheme>(build_scheme(m, depth, census, n_points));

  auto images_all = Stream<CantorPoint>::from_indexed(
      [scheme, census](std::size_t i) -> std::optional<CantorPoint> {
        if (i >= census) return std::nullopt;
        return scheme->embed_point(i);
      });
  auto ends = enumerate_members(parse_set("E"));
  auto end_points = Stream<CantorPoint>::from_indexed(
      [ends](std::size_t i) -> std::optional<CantorPoint> {
        auto q = ends.at(i);
        if (!q) return std::nullopt;
        return decode(*q);
      });
  CantorPoint x = avoid_translation(images_all, end_points);

  SierpinskiResult result;
  result.scheme = scheme;
  result.census = census;
  result.translation = x;

  // order embedding of the translated points into the canonical rationals;
  // only domain extensions are needed, so the finite census never starves a
  // range-side witness search
  PartialIso<CantorPoint, Rational, CantorLexLess, std::less<Rational>> phi;
  EnumOrder<Rational> rationals{enum_rationals()};
  for (std::size_t id = 0; id < n_points; ++id) {
    CantorPoint image = scheme->embed_point(id);
    CantorPoint moved = xor_add(image, x);
    phi = extend_domain(std::move(phi), moved, rationals, budget);
    Rational value = *phi.image(moved);
    result.images.push_back(std::move(image));
    result.translated.push_back(moved);
    result.rows.push_back({id, m.label ? m.label(id) : "", std::move(value)});
  }
  return result;
}

inline std::vector<std::pair<std::size_t, Rational>> sierpinski_map(
    const MetricPresentation& m, std::size_t n_points, std::size_t depth,
    std::size_t budget) {
  SierpinskiResult r = run_sierpinski_pipeline(m, n_points, depth, budget);
  std::vector<std::pair<std::size_t, Rational>> out;
  for (const auto& row : r.rows) out.emplace_back(row.id, row.value);
  return out;
}

}  // namespace ordtop
