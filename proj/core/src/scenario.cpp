#include "formation/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "formation/motion.hpp"

namespace formation {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ScenarioError(where + ": " + what);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Line/column of a byte offset, for parse diagnostics.
std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json parse_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ScenarioError(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                        ": " + e.what());
  }
}

Complex parse_complex(const json& j, const std::string& where) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(where, "expected a [re, im] pair");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

CVector parse_cvector(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  CVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = parse_complex(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

RMatrix parse_rmatrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nested array of reals");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(where, "expected non-empty rows");
  RMatrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      fail(where, "row " + std::to_string(r + 1) + " must have " + std::to_string(cols) +
                      " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) {
        fail(where, "entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) +
                        ") must be a real number");
      }
      m(static_cast<Index>(r), static_cast<Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

/// Complex matrix given row-by-row; each entry is [re, im].
CMatrix parse_cmatrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nested array");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) fail(where, "expected non-empty rows");
  CMatrix m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      fail(where, "row " + std::to_string(r + 1) + " must have " + std::to_string(cols) +
                      " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) =
          parse_complex(j[r][c], where + " (" + std::to_string(r + 1) + "," +
                                     std::to_string(c + 1) + ")");
    }
  }
  return m;
}

bool is_diagonal_matrix(const RMatrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (i != j && m(i, j) != 0.0) return false;
    }
  }
  return true;
}

MultiAgentSystem parse_system(const json& j) {
  if (!j.is_object()) fail("system", "expected an object");
  if (j.contains("agents")) {
    const auto& agents = j["agents"];
    if (!agents.is_array() || agents.empty()) fail("system.agents", "expected a non-empty array");
    RVector a(static_cast<Index>(agents.size()));
    RVector b(static_cast<Index>(agents.size()));
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const std::string where = "system.agents[" + std::to_string(i) + "]";
      if (!agents[i].is_object() || !agents[i].contains("a") || !agents[i].contains("b")) {
        fail(where, "expected {\"a\": ..., \"b\": ...}");
      }
      a(static_cast<Index>(i)) = agents[i]["a"].get<double>();
      b(static_cast<Index>(i)) = agents[i]["b"].get<double>();
    }
    try {
      return make_diagonal_system(a, b);
    } catch (const std::invalid_argument& e) {
      fail("system.agents", e.what());
    }
  }
  if (!j.contains("A") || !j.contains("B")) {
    fail("system", "expected either \"agents\" or \"A\"/\"B\"");
  }
  const RMatrix A = parse_rmatrix(j["A"], "system.A");
  const RMatrix B = parse_rmatrix(j["B"], "system.B");
  if (A.rows() != A.cols()) fail("system.A", "must be square");
  if (B.rows() != A.rows()) fail("system.B", "row count must match A");
  try {
    if (B.cols() == B.rows()) {
      if (!is_diagonal_matrix(B)) fail("system.B", "square B must be diagonal");
      return make_coupled_system(A, B.diagonal());
    }
    // Tall input: B = [diag(b_1..b_m); 0].
    for (Index i = 0; i < B.rows(); ++i) {
      for (Index j2 = 0; j2 < B.cols(); ++j2) {
        if (i != j2 && B(i, j2) != 0.0) fail("system.B", "tall B must be [diag(b); 0]");
      }
    }
    return make_tall_system(A, B.diagonal().head(B.cols()));
  } catch (const std::invalid_argument& e) {
    fail("system", e.what());
  }
}

EigenSpec parse_spec(const json& j, Index n) {
  if (!j.is_object()) fail("spec", "expected an object");
  if (j.contains("blocks")) {
    EigenSpec spec;
    const auto& blocks = j["blocks"];
    if (!blocks.is_array() || blocks.empty()) fail("spec.blocks", "expected a non-empty array");
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const std::string where = "spec.blocks[" + std::to_string(b) + "]";
      if (!blocks[b].is_object() || !blocks[b].contains("eigenvalue") ||
          !blocks[b].contains("chain")) {
        fail(where, "expected {\"eigenvalue\": [re,im], \"chain\": [...]}");
      }
      JordanBlock blk;
      blk.eigenvalue = parse_complex(blocks[b]["eigenvalue"], where + ".eigenvalue");
      const auto& chain = blocks[b]["chain"];
      if (!chain.is_array() || chain.empty()) fail(where + ".chain", "expected vectors");
      for (std::size_t c = 0; c < chain.size(); ++c) {
        CVector v = parse_cvector(chain[c], where + ".chain[" + std::to_string(c) + "]");
        if (v.size() != n) fail(where + ".chain", "vector length must equal agent count");
        blk.chain.push_back(std::move(v));
      }
      spec.blocks.push_back(std::move(blk));
    }
    return spec;
  }
  if (!j.contains("eigenvalues") || !j.contains("eigenvectors")) {
    fail("spec", "expected \"eigenvalues\" and \"eigenvectors\" (or \"blocks\")");
  }
  const CVector lambdas = parse_cvector(j["eigenvalues"], "spec.eigenvalues");
  const CMatrix V = parse_cmatrix(j["eigenvectors"], "spec.eigenvectors");
  if (V.rows() != n) fail("spec.eigenvectors", "row count must equal agent count");
  if (V.cols() != lambdas.size()) {
    fail("spec", "eigenvalue count must equal eigenvector column count");
  }
  EigenSpec spec;
  for (Index k = 0; k < lambdas.size(); ++k) {
    spec.blocks.push_back(JordanBlock{lambdas(k), {V.col(k)}});
  }
  return spec;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json cmatrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json cvector_json(const CVector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(complex_json(v(i)));
  return arr;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  const json j = parse_json(path);
  if (!j.is_object()) throw ScenarioError(path + ": top level must be an object");
  if (!j.contains("system")) throw ScenarioError(path + ": missing \"system\"");

  Scenario s;
  s.system = parse_system(j["system"]);
  const Index n = s.system.n();

  if (j.contains("formation")) {
    s.formation = parse_cvector(j["formation"], "formation");
    if (s.formation.size() != n) fail("formation", "length must equal agent count");
  }

  if (j.contains("spec")) s.explicit_spec = parse_spec(j["spec"], n);

  if (j.contains("generator")) {
    const auto& g = j["generator"];
    if (!g.is_object() || !g.contains("kind")) fail("generator", "expected {\"kind\": ...}");
    GeneratorDirective dir;
    dir.kind = g["kind"].get<std::string>();
    const bool known = dir.kind == "star" || dir.kind == "cyclic" || dir.kind == "line" ||
                       dir.kind == "rigid" || dir.kind == "circular";
    if (!known) fail("generator.kind", "unknown generator '" + dir.kind + "'");
    if (g.contains("lambdas")) dir.lambdas = parse_cvector(g["lambdas"], "generator.lambdas");
    if (g.contains("completion")) {
      std::vector<Index> completion;
      for (const auto& e : g["completion"]) {
        const Index idx = e.get<Index>();
        if (idx < 1 || idx > n) fail("generator.completion", "row index out of range");
        completion.push_back(idx - 1);
      }
      dir.completion = std::move(completion);
    }
    s.generator = std::move(dir);
  }

  if (s.explicit_spec && s.generator) {
    fail("spec", "give either an explicit spec or a generator, not both");
  }
  if (!s.explicit_spec && !s.generator && !j.contains("partition")) {
    fail("spec", "scenario needs a \"spec\", a \"generator\", or a \"partition\"");
  }

  std::string kind = "scalable";
  if (j.contains("kind")) kind = j["kind"].get<std::string>();
  if (s.generator) {
    if (s.generator->kind == "rigid") kind = "rigid";
    if (s.generator->kind == "circular") kind = "circular";
  }
  if (kind == "scalable") {
    s.kind = SpecKind::scalable();
  } else if (kind == "rigid") {
    if (!j.contains("d")) fail("d", "rigid scenarios need a size \"d\"");
    s.kind = SpecKind::rigid(j["d"].get<double>());
  } else if (kind == "circular") {
    if (!j.contains("b")) fail("b", "circular scenarios need a rate \"b\"");
    s.kind = SpecKind::circular(j["b"].get<double>());
  } else {
    fail("kind", "unknown problem kind '" + kind + "'");
  }

  // Resolve f: explicit field wins; otherwise the zero-eigenvalue eigenvector
  // of an explicit scalable spec.
  if (s.formation.size() == 0) {
    if (s.explicit_spec && s.kind.problem == SpecKind::Problem::Scalable) {
      double scale = 1.0;
      for (const auto& blk : s.explicit_spec->blocks) {
        scale = std::max(scale, 1.0 + std::abs(blk.eigenvalue));
      }
      for (const auto& blk : s.explicit_spec->blocks) {
        if (std::abs(blk.eigenvalue) <= kEigenvalueDistinctTol * scale && blk.length() == 1) {
          s.formation = blk.chain[0];
          break;
        }
      }
    }
    if (s.formation.size() == 0) {
      fail("formation", "cannot infer the formation vector; add a \"formation\" field");
    }
  }
  if (s.explicit_spec) s.explicit_spec->formation = s.formation;

  if (j.contains("constraints")) {
    for (const auto& e : j["constraints"]) {
      if (!e.is_array() || e.size() != 2) fail("constraints", "expected [i, j] pairs");
      const Index i = e[0].get<Index>();
      const Index jj = e[1].get<Index>();
      if (i < 1 || i > n || jj < 1 || jj > n || i == jj) {
        fail("constraints", "pair indices must be distinct and in [1, n]");
      }
      s.constraints.emplace_back(i - 1, jj - 1);
    }
  }

  if (j.contains("x0")) {
    s.x0 = parse_cvector(j["x0"], "x0");
    if (s.x0->size() != n) fail("x0", "length must equal agent count");
  }
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();

  if (j.contains("sim")) {
    const auto& c = j["sim"];
    if (c.contains("dt")) s.sim.dt = c["dt"].get<double>();
    if (c.contains("t_max")) s.sim.t_max = c["t_max"].get<double>();
    if (c.contains("record_every")) s.sim.record_every = c["record_every"].get<int>();
    if (c.contains("tol")) s.sim.convergence_tol = c["tol"].get<double>();
    if (c.contains("window")) s.sim.convergence_window = c["window"].get<int>();
  }

  if (j.contains("partition")) {
    const auto& p = j["partition"];
    Partition part;
    if (p.is_string() && p.get<std::string>() == "balanced") {
      part = balanced_partition(n);
    } else if (p.is_array()) {
      for (const auto& grp : p) {
        std::vector<Index> ids;
        for (const auto& e : grp) {
          const Index idx = e.get<Index>();
          if (idx < 1 || idx > n) fail("partition", "agent index out of range");
          ids.push_back(idx - 1);
        }
        part.groups.push_back(std::move(ids));
      }
    } else {
      fail("partition", "expected \"balanced\" or an array of groups");
    }
    s.partition = std::move(part);
  }
  if (j.contains("group_topology")) {
    const std::string g = j["group_topology"].get<std::string>();
    if (g == "star") {
      s.group_topology = GroupTopology::Star;
    } else if (g == "line") {
      s.group_topology = GroupTopology::Line;
    } else {
      fail("group_topology", "expected \"star\" or \"line\"");
    }
  }
  return s;
}

EigenSpec scenario_spec(const Scenario& scenario) {
  if (scenario.explicit_spec) return *scenario.explicit_spec;
  const auto& g = *scenario.generator;
  const auto& f = scenario.formation;
  if (g.kind == "star") return star_spec(scenario.system, f, g.lambdas);
  if (g.kind == "cyclic") return cyclic_spec(scenario.system, f);
  if (g.kind == "line") return line_spec(scenario.system, f);
  if (g.kind == "rigid") return rigid_spec(scenario.system, f, g.lambdas);
  if (g.kind == "circular") {
    return circular_spec(scenario.system, f, scenario.kind.rate, g.lambdas, g.completion);
  }
  throw ScenarioError("unknown generator kind '" + g.kind + "'");
}

CVector scenario_x0(const Scenario& scenario) {
  if (scenario.x0) return *scenario.x0;
  if (!scenario.seed) throw ScenarioError("scenario needs \"x0\" or \"seed\"");
  std::mt19937_64 rng(*scenario.seed);
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  CVector x0(scenario.system.n());
  for (Index i = 0; i < x0.size(); ++i) {
    x0(i) = Complex(-2.0 + 4.0 * uniform(), -2.0 + 4.0 * uniform());
  }
  return x0;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError("cannot write '" + path + "'");
  out << content;
}

void write_cmatrix_json(const std::string& path, const CMatrix& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["entries"] = cmatrix_json(m);
  write_text_file(path, j.dump(2) + "\n");
}

CMatrix read_cmatrix_json(const std::string& path) {
  const json j = parse_json(path);
  if (!j.is_object() || !j.contains("entries")) {
    throw ScenarioError(path + ": expected a matrix object with \"entries\"");
  }
  CMatrix m = parse_cmatrix(j["entries"], path);
  if (j.contains("rows") && j["rows"].get<Index>() != m.rows()) {
    throw ScenarioError(path + ": row count mismatch");
  }
  if (j.contains("cols") && j["cols"].get<Index>() != m.cols()) {
    throw ScenarioError(path + ": column count mismatch");
  }
  return m;
}

void write_eig_report_json(const std::string& path, const numeric::EigReport& report) {
  json j;
  j["eigenvalues"] = cvector_json(report.eigenvalues);
  j["right_eigenvectors"] = cmatrix_json(report.right_eigenvectors);
  j["residual"] = report.residual;
  write_text_file(path, j.dump(2) + "\n");
}

void write_report_json(const std::string& path, const ConvergenceReport& report,
                       const std::vector<std::pair<std::string, double>>& extras) {
  json j;
  j["converged"] = report.converged;
  j["c"] = complex_json(report.c);
  if (report.c_prime) j["c_prime"] = complex_json(*report.c_prime);
  if (report.theta) j["theta"] = *report.theta;
  j["final_error"] = report.final_error;
  if (report.time_to_converge) {
    j["time_to_converge"] = *report.time_to_converge;
  } else {
    j["time_to_converge"] = nullptr;
  }
  for (const auto& [k, v] : extras) j[k] = v;
  write_text_file(path, j.dump(2) + "\n");
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ostringstream out;
  const Index n = traj.states.empty() ? 0 : traj.states.front().size();
  out << "t";
  for (Index i = 0; i < n; ++i) {
    out << ", x" << i + 1 << "_re, x" << i + 1 << "_im";
  }
  out << ", err\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    put(traj.times[k]);
    for (Index i = 0; i < n; ++i) {
      out << ", ";
      put(traj.states[k](i).real());
      out << ", ";
      put(traj.states[k](i).imag());
    }
    out << ", ";
    put(traj.formation_error[k]);
    out << "\n";
  }
  write_text_file(path, out.str());
}

void write_trajectory_svg(const std::string& path, const Trajectory& traj) {
  constexpr double kCanvas = 800.0;
  constexpr double kMargin = 40.0;
  const Index n = traj.states.empty() ? 0 : traj.states.front().size();

  double lo_x = 0.0, hi_x = 1.0, lo_y = 0.0, hi_y = 1.0;
  bool first = true;
  for (const auto& x : traj.states) {
    for (Index i = 0; i < n; ++i) {
      const double re = x(i).real(), im = x(i).imag();
      if (first) {
        lo_x = hi_x = re;
        lo_y = hi_y = im;
        first = false;
      } else {
        lo_x = std::min(lo_x, re);
        hi_x = std::max(hi_x, re);
        lo_y = std::min(lo_y, im);
        hi_y = std::max(hi_y, im);
      }
    }
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  const double scale = (kCanvas - 2.0 * kMargin) / span;
  const double cx = 0.5 * (lo_x + hi_x);
  const double cy = 0.5 * (lo_y + hi_y);
  auto px = [&](double re) { return kCanvas / 2.0 + (re - cx) * scale; };
  auto py = [&](double im) { return kCanvas / 2.0 - (im - cy) * scale; };

  std::ostringstream out;
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n";
  std::snprintf(buf, sizeof(buf), "<!-- transform: px = 400 + (re - %.6g) * %.6g, "
                                  "py = 400 - (im - %.6g) * %.6g -->\n",
                cx, scale, cy, scale);
  out << buf;
  out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";

  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  for (Index i = 0; i < n; ++i) {
    const char* color = kColors[i % 8];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%.6g,%.6g ", px(traj.states[k](i).real()),
                    py(traj.states[k](i).imag()));
      out << buf;
    }
    out << "\"/>\n";
    // initial marker: x
    const double x0 = px(traj.states.front()(i).real());
    const double y0 = py(traj.states.front()(i).imag());
    std::snprintf(buf, sizeof(buf),
                  "<path d=\"M %.6g %.6g L %.6g %.6g M %.6g %.6g L %.6g %.6g\" stroke=\"%s\" "
                  "stroke-width=\"2\"/>\n",
                  x0 - 5, y0 - 5, x0 + 5, y0 + 5, x0 - 5, y0 + 5, x0 + 5, y0 - 5, color);
    out << buf;
    // steady marker: circle
    const double x1 = px(traj.states.back()(i).real());
    const double y1 = py(traj.states.back()(i).imag());
    std::snprintf(buf, sizeof(buf),
                  "<circle cx=\"%.6g\" cy=\"%.6g\" r=\"5\" fill=\"none\" stroke=\"%s\" "
                  "stroke-width=\"2\"/>\n",
                  x1, y1, color);
    out << buf;
  }
  out << "</svg>\n";
  write_text_file(path, out.str());
}

void write_bench_csv(const std::string& path, const BenchTable& table) {
  std::ostringstream out;
  out << "n,centralized_ms,hierarchical_ms,ratio\n";
  char buf[64];
  for (const auto& row : table.rows) {
    out << row.n << ",";
    std::snprintf(buf, sizeof(buf), "%.6g,", row.centralized_ms);
    out << buf;
    std::snprintf(buf, sizeof(buf), "%.6g,", row.hierarchical_ms);
    out << buf;
    std::snprintf(buf, sizeof(buf), "%.6g", row.ratio);
    out << buf << "\n";
  }
  write_text_file(path, out.str());
}

}  // namespace formation
