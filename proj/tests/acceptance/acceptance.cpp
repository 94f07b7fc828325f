// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "../common/fixtures.hpp"
#include "splice/certificate.hpp"
#include "splice/endcurve.hpp"
#include "splice/error.hpp"
#include "splice/recover.hpp"
#include "splice/smoothness.hpp"

using namespace splice;
using namespace splice::testing;

namespace {

struct Tally {
  long checks = 0;
  long failures = 0;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      if (notes.size() < 5) notes.push_back(what);
    }
  }
  void merge(const Tally& other) {
    checks += other.checks;
    failures += other.failures;
    for (const auto& n : other.notes) {
      if (notes.size() < 5) notes.push_back(n);
    }
  }
};

bool report(int id, const std::string& title, const Tally& t, const std::string& detail) {
  const bool pass = t.failures == 0 && t.checks > 0;
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << detail << "; "
            << t.checks << " checks, " << t.failures << " failures)\n";
  for (const auto& n : t.notes) std::cout << "     " << n << "\n";
  return pass;
}

// Runs body(i) for i in [0, count) on a small pool; one Tally per index.
std::vector<Tally> parallel(std::size_t count, const std::function<void(std::size_t, Tally&)>& body) {
  std::vector<Tally> out(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i, out[i]);
      } catch (const std::exception& e) {
        out[i].expect(false, std::string("item ") + std::to_string(i) + " threw: " + e.what());
      }
    }
  };
  const unsigned n = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

Tally total(const std::vector<Tally>& parts) {
  Tally t;
  for (const auto& p : parts) t.merge(p);
  return t;
}

std::string label(const Sample& s) {
  std::ostringstream out;
  out << s.leaves << " leaves, " << s.nodes << " nodes, seed " << s.seed;
  return out.str();
}

bool same_up_to_scale(const Polynomial& p, const Polynomial& q) {
  if (p.terms().size() != q.terms().size() || p.is_zero()) return false;
  const Rational c = q.coeff(p.terms().front().exponent);
  return c != 0 && p.scaled(c / p.terms().front().coeff) == q;
}

std::vector<Polynomial> full_equations(const SpliceSystem& s) {
  std::vector<Polynomial> out;
  for (const auto& eq : s.equations()) out.push_back(eq.full());
  return out;
}

// Strictly positive points of the fan: node rays and the interior of every cone.
std::vector<std::pair<std::string, WeightVector>> positive_cells(const SpliceFan& f) {
  std::vector<std::pair<std::string, WeightVector>> out;
  auto positive = [](const std::vector<BigInt>& v) {
    return std::all_of(v.begin(), v.end(), [](const BigInt& x) { return x > 0; });
  };
  for (const auto& r : f.rays) {
    if (positive(r.vector)) out.push_back({"ray " + r.label, as_weight(r.vector)});
  }
  for (const auto& c : f.cones) {
    const auto& a = f.ray(c.a)->vector;
    const auto& b = f.ray(c.b)->vector;
    WeightVector w(f.n);
    for (int i = 0; i < f.n; ++i) w[i] = Rational(a[i] + b[i]);
    out.push_back({"cone " + c.a + "-" + c.b, w});
  }
  return out;
}

// ---------------------------------------------------------------------------

bool golden_example() {
  Tally t;
  const auto d = d1();
  const VertexId u = d.vertex("u"), v = d.vertex("v");
  const auto& link = d.linking();
  t.expect(d.total_weight(u) == 294, "d_u");
  t.expect(d.total_weight(v) == 770, "d_v");
  t.expect(link.link(u, v) == 420, "l_uv");

  const auto au = semigroup_decompose(d, u, 2);
  t.expect(au && au->coeffs == std::vector<std::int64_t>{0, 0, 0, 1, 1}, "a_{u,v}");
  t.expect(link.reduced(u, 2) == 10 && link.reduced(u, 3) == 14 && link.reduced(u, 4) == 35, "reduced at u");
  const auto av = semigroup_decompose(d, v, 2);
  t.expect(av && av->coeffs == std::vector<std::int64_t>{1, 4, 0, 0, 0}, "a_{v,u}");
  t.expect(link.reduced(v, 0) == 3 && link.reduced(v, 1) == 2, "reduced at v");

  t.expect(node_weight_vector(d, u).entries == ints({147, 98, 60, 84, 210}), "w_u");
  t.expect(node_weight_vector(d, v).entries == ints({210, 140, 110, 154, 385}), "w_v");

  const auto s = d1_system();
  const auto wu = node_weight(d, u);
  const Polynomial& fv1 = s.equations()[1].minimal;
  const Polynomial& fv2 = s.equations()[2].minimal;
  t.expect(initial_form(fv1, wu) == fv1 - poly(5, {{1, exps({1, 4, 0, 0, 0})}}), "in_{w_u} f_{v,1}");
  t.expect(initial_form(fv2, wu) == fv2 - poly(5, {{33, exps({1, 4, 0, 0, 0})}}), "in_{w_u} f_{v,2}");
  return report(1, "golden example D1", t, "weights, linking, co-weights, node weight vectors, initial forms");
}

bool end_curve_golden() {
  Tally t;
  const auto s = d1_system();
  const auto r = root(s.diagram(), "l1");
  t.expect(r.links == ints({49, 30, 42, 105}), "linking numbers from l1");
  const auto ecs = end_curve_system(s, r);
  const auto b = binomial_reduce(ecs);
  auto contains = [&](const Polynomial& p) {
    return std::any_of(b.binomials.begin(), b.binomials.end(),
                       [&](const Binomial& x) { return same_up_to_scale(p, to_polynomial(x, b.num_vars)); });
  };
  t.expect(contains(poly(5, {{1, exps({0, 0, 0, 5, 0})}, {32, exps({0, 0, 0, 0, 2})}})), "z4^5 + 32 z5^2");
  t.expect(contains(poly(5, {{1, exps({0, 0, 7, 0, 0})}, {-2187, exps({0, 0, 0, 0, 2})}})), "z3^7 - 2187 z5^2");

  const auto c = parameterize(ecs, r);
  t.expect(c.g == 1, "g = 1");
  t.expect(c.exponents == ints({49, 30, 42, 105}), "exponents");
  t.expect(c.exact.size() == 1 && c.exact[0] && *c.exact[0] == std::vector<Rational>{-1, 3, -2, 1},
           "exact component (-1, 3, -2, 1)");
  t.expect(verify_parameterization(c, ecs), "exact substitution");

  MonomialCurve given = c;
  given.exact = {std::vector<Rational>{-1, 3, -2, 1}};
  t.expect(verify_parameterization(given, ecs), "(-t^49, 3t^30, -2t^42, t^105) satisfies the end-curve");
  given.exact = {std::vector<Rational>{1, 3, -2, 1}};
  t.expect(!verify_parameterization(given, ecs), "sign flip is rejected");
  return report(2, "end-curve golden at l1", t, "binomials, g, exact parameterization");
}

bool fan_golden() {
  Tally t;
  const auto f = splice_fan(d1());
  t.expect(f.rays.size() == 7, "7 rays");
  t.expect(f.cones.size() == 6, "6 cones");
  for (const auto& c : f.cones) t.expect(c.multiplicity == 1, "multiplicity of " + c.a + "-" + c.b);
  t.expect(gcd_of(f.ray("u")->vector) == 1 && f.ray("u")->vector == ints({147, 98, 60, 84, 210}), "ray u");
  t.expect(gcd_of(f.ray("v")->vector) == 1 && f.ray("v")->vector == ints({210, 140, 110, 154, 385}), "ray v");
  return report(3, "splice fan of D1 and multiplicities", t, "7 rays, 6 cones");
}

struct Population {
  std::vector<Sample> samples;
  std::vector<SpliceDiagram> diagrams;
};

Population population() {
  Population p;
  p.samples = sample_grid(14, 90000);
  for (const auto& s : p.samples) p.diagrams.push_back(random_diagram(s.leaves, s.nodes, s.seed, s.coprime));
  return p;
}

bool membership_dichotomy(const Population& pop) {
  std::atomic<long> queries{0}, on_fan{0}, outside{0};
  const auto parts = parallel(pop.diagrams.size(), [&](std::size_t i, Tally& t) {
    const auto& d = pop.diagrams[i];
    const auto s = build_default_system(d);
    const auto f = splice_fan(d);
    const auto eqs = full_equations(s);
    std::mt19937_64 rng(pop.samples[i].seed);
    for (int q = 0; q < 50; ++q) {
      const bool want_fan = q % 2 == 0;
      const WeightVector w = random_query(f, rng, want_fan);
      const bool located = locate(f, w).kind != CellKind::Outside;
      const auto cert = certificate_search(s, w);
      const bool oracle = monomial_in_span_oracle(eqs, w).has_value();
      ++queries;
      if (located) ++on_fan;
      else ++outside;
      t.expect(located != cert.has_value(), "dichotomy: " + label(pop.samples[i]));
      t.expect(cert.has_value() == oracle, "oracle: " + label(pop.samples[i]));
      if (cert) t.expect(verify_certificate(s, w, *cert), "certificate check: " + label(pop.samples[i]));
      if (want_fan) t.expect(located, "on-fan sample located: " + label(pop.samples[i]));
    }
  });
  std::ostringstream detail;
  detail << pop.diagrams.size() << " diagrams, " << queries << " queries, " << on_fan << " on the fan, " << outside
         << " outside";
  return report(4, "membership dichotomy", total(parts), detail.str());
}

bool boundary(const Population& pop) {
  std::atomic<long> pairs{0}, singles{0}, min_samples{1 << 30};
  const auto parts = parallel(pop.diagrams.size(), [&](std::size_t i, Tally& t) {
    const auto& d = pop.diagrams[i];
    const auto s = build_default_system(d);
    const int n = d.num_leaves();
    auto note_samples = [&](int k) {
      long cur = min_samples.load();
      while (k < cur && !min_samples.compare_exchange_weak(cur, k)) {
      }
    };
    for (VertexId a = 0; a < n; ++a) {
      const auto r = root(d, a);
      const auto curve = parameterize(end_curve_system(s, r), r);
      const auto one = boundary_trop(s, {a}, 50, pop.samples[i].seed + a);
      t.expect(one.consistent && one.ray && *one.ray == curve.exponents, "1-leaf ray: " + label(pop.samples[i]));
      note_samples(one.samples);
      ++singles;
      for (VertexId b = a + 1; b < n; ++b) {
        const auto two = boundary_trop(s, {a, b}, 50, pop.samples[i].seed + 97 * a + b);
        t.expect(two.consistent && !two.ray && two.samples >= 50, "2-leaf Empty: " + label(pop.samples[i]));
        note_samples(two.samples);
        ++pairs;
      }
    }
  });
  std::ostringstream detail;
  detail << pairs << " two-leaf truncations, " << singles << " one-leaf truncations, >= " << min_samples
         << " samples each";
  return report(5, "boundary tropicalization", total(parts), detail.str());
}

bool balancing(const Population& pop) {
  std::atomic<long> perturbed{0};
  const auto parts = parallel(pop.diagrams.size(), [&](std::size_t i, Tally& t) {
    const auto f = splice_fan(pop.diagrams[i]);
    t.expect(check_balancing(f), "balanced: " + label(pop.samples[i]));
    for (std::size_t c = 0; c < f.cones.size(); ++c) {
      auto g = f;
      g.cones[c].multiplicity += 1;
      t.expect(!check_balancing(g), "perturbation detected: " + label(pop.samples[i]));
      ++perturbed;
    }
  });
  std::ostringstream detail;
  detail << pop.diagrams.size() << " fans, " << perturbed << " single-cone perturbations";
  return report(6, "balancing", total(parts), detail.str());
}

bool recovery() {
  const auto samples = sample_grid(8, 70000);
  const auto parts = parallel(samples.size(), [&](std::size_t i, Tally& t) {
    const auto& s = samples[i];
    const auto d = random_diagram(s.leaves, s.nodes, s.seed, true);
    t.expect(roundtrip(d), "roundtrip: " + label(s));
    auto f = splice_fan(d);
    f.cones[s.seed % f.cones.size()].multiplicity = 2;
    try {
      recover(f);
      t.expect(false, "non-coprime fan accepted: " + label(s));
    } catch (const Error& e) {
      t.expect(e.code() == ErrorCode::NonCoprimeFan, "non-coprime fan refused: " + label(s));
    }
  });
  Tally t = total(parts);
  t.expect(roundtrip(d1()), "roundtrip D1");
  auto f = splice_fan(d1());
  f.cones[0].multiplicity = 4;
  try {
    recover(f);
    t.expect(false, "D1 fan with multiplicity 4 accepted");
  } catch (const Error& e) {
    t.expect(e.code() == ErrorCode::NonCoprimeFan, "D1 fan with multiplicity 4 refused");
  }
  return report(7, "recovery round trip", t, std::to_string(samples.size()) + " coprime diagrams plus D1");
}

bool invariants(const Population& pop) {
  std::atomic<long> triples{0};
  const auto parts = parallel(pop.diagrams.size(), [&](std::size_t i, Tally& t) {
    const auto& d = pop.diagrams[i];
    const auto& link = d.linking();
    const int nv = d.num_vertices();
    const std::string where = label(pop.samples[i]);
    auto on_path = [&](VertexId x, VertexId a, VertexId b) {
      const auto path = geodesic(d, a, b);
      return std::find(path.begin(), path.end(), x) != path.end();
    };
    for (VertexId a = 0; a < nv; ++a) {
      for (VertexId b = 0; b < nv; ++b) {
        t.expect(link.link(a, b) == link.link(b, a), "symmetry: " + where);
        if (a != b && d.is_node(a) && d.is_node(b)) {
          t.expect(d.total_weight(a) * d.total_weight(b) > link.link(a, b) * link.link(a, b), "Cauchy-Schwarz: " + where);
        }
        for (VertexId c = 0; c < nv; ++c) {
          ++triples;
          // u = b in [a, c]
          if (on_path(b, a, c)) {
            t.expect(link.link(c, b) * link.link(b, a) == link.link(c, a) * d.total_weight(b), "geodesic: " + where);
          }
          if (d.is_node(a) && d.is_node(b) && d.is_node(c)) {
            const BigInt lhs = link.link(a, b) * link.link(a, c);
            const BigInt rhs = d.total_weight(a) * link.link(b, c);
            t.expect(lhs <= rhs, "hypermetric: " + where);
            t.expect((lhs == rhs) == on_path(a, b, c), "hypermetric equality: " + where);
          }
        }
      }
    }
    for (int j = 0; j < d.num_nodes(); ++j) {
      const VertexId v = d.node_id(j);
      const auto wv = node_weight_vector(d, v).entries;
      for (const auto& inc : d.incident(v)) {
        const auto a = semigroup_decompose(d, v, inc.edge);
        t.expect(a.has_value(), "co-weight exists: " + where);
        if (!a) continue;
        t.expect(pair(wv, a->coeffs) == d.total_weight(v), "co-weight pairing: " + where);
        for (int k = 0; k < d.num_nodes(); ++k) {
          const VertexId u = d.node_id(k);
          const BigInt value = pair(node_weight_vector(d, u).entries, a->coeffs);
          const bool inside = u != v && on_path(inc.neighbor, v, u);
          t.expect(value >= link.link(u, v), "key inequality: " + where);
          t.expect((value == link.link(u, v)) == !inside, "key equality: " + where);
        }
      }
    }
  });
  std::ostringstream detail;
  detail << pop.diagrams.size() << " diagrams, " << triples << " vertex triples";
  return report(8, "invariant suites", total(parts), detail.str());
}

bool smoothness(const Population& pop) {
  struct Job {
    std::string name;
    SpliceSystem system;
    WeightVector w;
  };
  std::vector<Job> jobs;
  const auto d = d1();
  const auto s = d1_system();
  for (const auto& [name, w] : positive_cells(splice_fan(d))) jobs.push_back({"D1 " + name, s, w});
  const std::size_t d1_cells = jobs.size();
  int random_count = 0;
  for (std::size_t i = 0; i < pop.diagrams.size() && random_count < 20; i += pop.diagrams.size() / 20, ++random_count) {
    const auto sys = build_default_system(pop.diagrams[i]);
    for (const auto& [name, w] : positive_cells(splice_fan(pop.diagrams[i]))) {
      jobs.push_back({label(pop.samples[i]) + " " + name, sys, w});
    }
  }

  std::atomic<long> samples{0};
  std::mutex mu;
  double worst = 1;
  const auto parts = parallel(jobs.size(), [&](std::size_t i, Tally& t) {
    const auto r = smoothness_smoke(jobs[i].system, jobs[i].w, 10, 1000 + i);
    samples += r.samples;
    t.expect(r.samples >= 10 && r.full_rank, "full rank: " + jobs[i].name);
    std::lock_guard<std::mutex> lock(mu);
    worst = std::min(worst, r.min_ratio);
  });
  Tally t = total(parts);

  // two proportional equations at v
  auto coeffs = d1_coefficients();
  coeffs[1].rows = {{1, 2}, {1, 2}, {1, 2}, {1, 2}};
  const auto broken = build_system_unchecked(d, coeffs);
  bool flagged = false;
  try {
    flagged = !smoothness_smoke(broken, node_weight(d, d.vertex("v")), 10, 7).full_rank;
  } catch (const Error&) {
    flagged = true;
  }
  t.expect(flagged, "Hamm-broken system flagged");

  std::ostringstream detail;
  detail << d1_cells << " positive cells of fan(D1), " << random_count << " random diagrams, " << jobs.size()
         << " cells, " << samples << " samples, smallest ratio " << worst;
  return report(9, "Newton non-degeneracy smoke", t, detail.str());
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  std::cout.setf(std::ios::fixed);
  std::cout.precision(6);
  const Population pop = population();
  bool ok = true;
  ok &= golden_example();
  ok &= end_curve_golden();
  ok &= fan_golden();
  ok &= membership_dichotomy(pop);
  ok &= boundary(pop);
  ok &= balancing(pop);
  ok &= recovery();
  ok &= invariants(pop);
  ok &= smoothness(pop);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << (ok ? "all criteria pass" : "some criteria fail") << " in " << seconds << " s\n";
  return ok ? 0 : 1;
}
