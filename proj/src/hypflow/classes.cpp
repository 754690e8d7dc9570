#include "axray/hypflow/classes.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

namespace axray::hypflow {

namespace {

// Words as byte strings, letter k stored as 'a'+k, for cheap rotation and
// substring handling during canonicalization.

std::string word_inverse(const std::string& w, int n_letters) {
  std::string r(w.rbegin(), w.rend());
  for (char& c : r) c = static_cast<char>('a' + ((c - 'a') + n_letters / 2) % n_letters);
  return r;
}

// Cancel adjacent inverse pairs, cyclically, until stable.
std::string cyc_reduce(std::string w, int n_letters) {
  const int half = n_letters / 2;
  bool changed = true;
  while (changed && w.size() >= 2) {
    changed = false;
    std::string out;
    for (char c : w) {
      if (!out.empty() && ((out.back() - 'a') + half) % n_letters == c - 'a') {
        out.pop_back();
        changed = true;
      } else {
        out.push_back(c);
      }
    }
    w = out;
    while (w.size() >= 2 && ((w.front() - 'a') + half) % n_letters == w.back() - 'a') {
      w = w.substr(1, w.size() - 2);
      changed = true;
    }
  }
  return w;
}

// Relator-window rewrites: any run of k >= half the relator letters equals
// the inverse of the complementary run, so substrings swap without changing
// the group element. Shortening rewrites (k > half) reach the minimal word
// length of a class; half-length swaps connect the minimal words.
struct Rewriter {
  std::vector<std::map<std::string, std::string>> repl;
  int n_letters;
  int win_lo, win_hi;  // rewrite window sizes [lo, hi]
  explicit Rewriter(const FuchsianGroup& group) : n_letters(group.n_letters()) {
    std::string rel;
    for (int l : group.relator()) rel.push_back(static_cast<char>('a' + l));
    const int R = static_cast<int>(rel.size());
    win_lo = R / 2;
    win_hi = R - 1;
    repl.resize(static_cast<size_t>(R));
    std::vector<std::string> rots;
    for (int s = 0; s < R; ++s) rots.push_back(rel.substr(s) + rel.substr(0, s));
    const std::string ri = word_inverse(rel, n_letters);
    for (int s = 0; s < R; ++s) rots.push_back(ri.substr(s) + ri.substr(0, s));
    for (const auto& rr : rots)
      for (int k = win_lo; k <= win_hi; ++k)
        repl[static_cast<size_t>(k)][rr.substr(0, static_cast<size_t>(k))] =
            word_inverse(rr.substr(static_cast<size_t>(k)), n_letters);
  }
};

std::string lex_min_rotation(const std::string& w) {
  std::string best = w;
  for (size_t s = 1; s < w.size(); ++s) best = std::min(best, w.substr(s) + w.substr(0, s));
  return best;
}

// Canonical key of the conjugacy class of w: closure under cyclic rotation,
// relator rewrites, cancellation, and optionally inversion; lex-min among
// the shortest forms reached.
std::string canonical(const std::string& w0, const Rewriter& rw, bool merge_inverse) {
  std::set<std::string> seen;
  std::deque<std::string> queue;
  auto push = [&](std::string w) {
    w = cyc_reduce(std::move(w), rw.n_letters);
    std::string key = lex_min_rotation(w);
    if (seen.insert(key).second) queue.push_back(std::move(w));
  };
  push(w0);
  if (merge_inverse) push(word_inverse(w0, rw.n_letters));
  size_t min_len = std::string::npos;
  std::string best;
  int guard = 0;
  while (!queue.empty() && ++guard < 20000) {
    const std::string w = queue.front();
    queue.pop_front();
    const std::string nr = lex_min_rotation(w);
    if (w.size() < min_len || (w.size() == min_len && nr < best)) {
      min_len = w.size();
      best = nr;
    }
    const size_t n = w.size();
    if (n < static_cast<size_t>(rw.win_lo)) continue;
    for (size_t off = 0; off < n; ++off) {
      const std::string rot = w.substr(off) + w.substr(0, off);
      for (int k = rw.win_lo; k <= rw.win_hi && static_cast<size_t>(k) <= n; ++k) {
        const auto it = rw.repl[static_cast<size_t>(k)].find(rot.substr(0, static_cast<size_t>(k)));
        if (it != rw.repl[static_cast<size_t>(k)].end())
          push(it->second + rot.substr(static_cast<size_t>(k)));
      }
    }
  }
  return best;
}

int pick_threads(int requested, long long work) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  const int cap = hw == 0 ? 4 : static_cast<int>(hw);
  return static_cast<int>(std::min<long long>(cap, std::max<long long>(1, work)));
}

}  // namespace

std::vector<GeodesicClass> enumerate_classes(const FuchsianGroup& group, double length_max,
                                             int word_cutoff, const EnumerateOptions& opts,
                                             EnumerationLog* log) {
  if (!(length_max > 0)) throw std::invalid_argument("enumerate_classes: length_max must be > 0");
  if (word_cutoff < 1) throw std::invalid_argument("enumerate_classes: word_cutoff must be >= 1");
  const int nl = group.n_letters();
  const int half = nl / 2;
  const double trace_cap = 2.0 * std::cosh(length_max / 2.0);

  // Depth-first sweep of cyclically reduced words, sharded by first letter.
  std::vector<std::vector<std::pair<std::string, double>>> survivors(
      static_cast<size_t>(nl));
  std::vector<long long> skipped(static_cast<size_t>(nl), 0);
  std::vector<std::thread> workers;
  const int n_threads = pick_threads(opts.threads, nl);
  std::vector<int> assignment(static_cast<size_t>(nl));
  for (int f = 0; f < nl; ++f) assignment[static_cast<size_t>(f)] = f % n_threads;
  for (int t = 0; t < n_threads; ++t)
    workers.emplace_back([&, t]() {
      for (int first = 0; first < nl; ++first) {
        if (assignment[static_cast<size_t>(first)] != t) continue;
        auto& out = survivors[static_cast<size_t>(first)];
        std::string word(1, static_cast<char>('a' + first));
        std::function<void(const Mat2&)> rec = [&](const Mat2& prod) {
          const int d = static_cast<int>(word.size());
          if ((word[0] - 'a' + half) % nl != word[static_cast<size_t>(d - 1)] - 'a' || d == 1) {
            const double tr = std::abs(prod(0, 0) + prod(1, 1));
            if (tr <= 2.0 + 1e-12) {
              ++skipped[static_cast<size_t>(first)];
            } else if (tr <= trace_cap) {
              const double ell = 2.0 * std::acosh(tr / 2.0);
              if (ell <= length_max) out.push_back({word, ell});
            }
          }
          if (d >= word_cutoff) return;
          for (int l = 0; l < nl; ++l) {
            if ((word[static_cast<size_t>(d - 1)] - 'a' + half) % nl == l) continue;
            word.push_back(static_cast<char>('a' + l));
            rec(Mat2(prod * group.letter(l)));
            word.pop_back();
          }
        };
        rec(group.letter(first));
      }
    });
  for (auto& w : workers) w.join();

  // Canonicalize survivors in parallel, then merge in a fixed order.
  const Rewriter rw(group);
  std::vector<std::pair<std::string, double>> flat;
  for (auto& s : survivors) flat.insert(flat.end(), s.begin(), s.end());
  std::vector<std::string> keys(flat.size());
  {
    const int ct = pick_threads(opts.threads, static_cast<long long>(flat.size()) / 512);
    std::vector<std::thread> cw;
    for (int t = 0; t < ct; ++t)
      cw.emplace_back([&, t]() {
        for (size_t i = static_cast<size_t>(t); i < flat.size(); i += static_cast<size_t>(ct))
          keys[i] = canonical(flat[i].first, rw, !opts.oriented);
      });
    for (auto& w : cw) w.join();
  }
  std::map<std::string, double> classes;
  for (size_t i = 0; i < flat.size(); ++i) classes.emplace(keys[i], flat[i].second);

  std::vector<GeodesicClass> out;
  out.reserve(classes.size());
  for (const auto& [key, ell] : classes) {
    GeodesicClass c;
    for (char ch : key) c.word.push_back(ch - 'a');
    c.matrix = group.word_matrix(c.word);
    c.trace = std::abs(c.matrix.trace());
    c.length = 2.0 * std::acosh(c.trace / 2.0);
    (void)ell;
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const GeodesicClass& a, const GeodesicClass& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.word < b.word;
  });
  if (log) {
    log->words_kept = static_cast<long long>(flat.size());
    log->non_hyperbolic = 0;
    for (long long s : skipped) log->non_hyperbolic += s;
  }
  return out;
}

GeodesicClass reversed(const FuchsianGroup& group, const GeodesicClass& c) {
  GeodesicClass r;
  r.word.reserve(c.word.size());
  for (auto it = c.word.rbegin(); it != c.word.rend(); ++it)
    r.word.push_back(group.inverse_letter(*it));
  r.matrix = group.word_matrix(r.word);
  r.trace = std::abs(r.matrix.trace());
  r.length = 2.0 * std::acosh(r.trace / 2.0);
  return r;
}

double xray_class(const FuchsianGroup& group, const SurfaceField& field, const GeodesicClass& c,
                  int n_quad) {
  if (n_quad < 64) throw std::invalid_argument("xray_class: n_quad must be >= 64");
  const double ell = translation_length(c.matrix);
  Mat2 cur = group.reduce(axis_frame(c.matrix));
  const double dt = ell / n_quad;
  double sum = 0.0;
  for (int i = 0; i < n_quad; ++i) {
    sum += field(cur);
    cur = group.reduce(Mat2(cur * flow_translation(dt)));
  }
  return sum / n_quad;
}

}  // namespace axray::hypflow
