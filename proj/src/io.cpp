#include "gpelab/io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "gpelab/errors.hpp"
#include "gpelab/version.hpp"

namespace gpelab {

std::uint64_t fnv1a_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string manifest_line(const std::string& config_text) {
  return std::string("# gpelab ") + kVersion + " config=" + hash_hex(fnv1a_hash(config_text));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_vector_block(std::ostringstream& out, const std::string& label,
                        const Eigen::VectorXd& v) {
  out << label << ":\n";
  for (Eigen::Index j = 0; j < v.size(); ++j) out << format_double(v[j]) << "\n";
}

std::string potential_spec_line(const PotentialSpec& spec) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ZeroPotential>) {
          return "zero";
        } else if constexpr (std::is_same_v<T, SnLattice>) {
          return "sn_lattice " + format_double(p.V0) + " " + format_double(p.k);
        } else if constexpr (std::is_same_v<T, CosineLattice>) {
          return "cosine " + format_double(p.V0) + " " + format_double(p.wavenumber);
        } else {
          return "tabulated " + std::to_string(p.x.size());
        }
      },
      spec);
}

}  // namespace

std::string state_to_text(const StationaryState& state, const std::string& header) {
  std::ostringstream out;
  out << "# gpelab state v1\n";
  if (!header.empty()) out << header << "\n";
  out << "n_points = " << state.grid.n << "\n";
  out << "period_length = " << format_double(state.grid.length) << "\n";
  out << "mu = " << format_double(state.mu) << "\n";
  out << "g1 = " << format_double(state.g1) << "\n";
  out << "laplacian = " << laplacian_kind_name(state.lap) << "\n";
  out << "trivial = " << (state.trivial ? 1 : 0) << "\n";
  out << "potential = " << potential_spec_line(state.potential) << "\n";
  if (const auto* tab = std::get_if<TabulatedPotential>(&state.potential)) {
    write_vector_block(out, "potential_x", tab->x);
    write_vector_block(out, "potential_V", tab->V);
  }
  write_vector_block(out, "R", state.R);
  return out.str();
}

void save_state(const StationaryState& state, const std::string& path,
                const std::string& header) {
  write_text_file(path, state_to_text(state, header));
}

namespace {

struct StateParser {
  std::istringstream in;
  std::string name;
  int lineno = 0;

  StateParser(const std::string& text, const std::string& n) : in(text), name(n) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw ConfigError(name + ":" + std::to_string(lineno) + ": " + msg);
  }

  bool next_content_line(std::string& line) {
    while (std::getline(in, line)) {
      ++lineno;
      const auto a = line.find_first_not_of(" \t\r");
      if (a == std::string::npos) continue;
      if (line[a] == '#') continue;
      const auto b = line.find_last_not_of(" \t\r");
      line = line.substr(a, b - a + 1);
      return true;
    }
    return false;
  }

  std::pair<std::string, std::string> expect_kv(const std::string& key) {
    std::string line;
    if (!next_content_line(line)) fail("unexpected end of file, expected '" + key + "'");
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected '" + key + " = ...'");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string k = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (k != key) fail("expected key '" + key + "', found '" + k + "'");
    return {k, v};
  }

  double to_double(const std::string& v) {
    try {
      size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument("");
      return d;
    } catch (const std::exception&) {
      fail("not a number: '" + v + "'");
    }
  }

  Eigen::VectorXd read_block(const std::string& label, Eigen::Index count) {
    std::string line;
    if (!next_content_line(line)) fail("unexpected end of file, expected '" + label + ":'");
    if (line != label + ":") fail("expected '" + label + ":', found '" + line + "'");
    Eigen::VectorXd v(count);
    for (Eigen::Index j = 0; j < count; ++j) {
      if (!next_content_line(line)) fail("truncated '" + label + "' block");
      v[j] = to_double(line);
    }
    return v;
  }
};

}  // namespace

StationaryState state_from_text(const std::string& text, const std::string& name) {
  StateParser p(text, name);
  StationaryState st;
  const int n = static_cast<int>(p.to_double(p.expect_kv("n_points").second));
  if (n < 2) p.fail("n_points must be >= 2");
  const double length = p.to_double(p.expect_kv("period_length").second);
  st.grid = Grid(n, length);
  st.mu = p.to_double(p.expect_kv("mu").second);
  st.g1 = p.to_double(p.expect_kv("g1").second);
  st.lap = laplacian_kind_from_name(p.expect_kv("laplacian").second);
  st.trivial = p.to_double(p.expect_kv("trivial").second) != 0.0;
  const std::string pot = p.expect_kv("potential").second;
  std::istringstream pot_in(pot);
  std::string kind;
  pot_in >> kind;
  if (kind == "zero") {
    st.potential = ZeroPotential{};
  } else if (kind == "sn_lattice") {
    SnLattice sn;
    if (!(pot_in >> sn.V0 >> sn.k)) p.fail("sn_lattice needs V0 and k");
    st.potential = sn;
  } else if (kind == "cosine") {
    CosineLattice cs;
    if (!(pot_in >> cs.V0 >> cs.wavenumber)) p.fail("cosine needs V0 and wavenumber");
    st.potential = cs;
  } else if (kind == "tabulated") {
    Eigen::Index count = 0;
    if (!(pot_in >> count) || count < 4) p.fail("tabulated needs a sample count >= 4");
    TabulatedPotential tab;
    tab.x = p.read_block("potential_x", count);
    tab.V = p.read_block("potential_V", count);
    st.potential = tab;
  } else {
    p.fail("unknown potential kind '" + kind + "'");
  }
  st.R = p.read_block("R", n);
  st.V = sample_potential(st.potential, st.grid);
  st.converged = true;
  return st;
}

StationaryState load_state(const std::string& path) {
  return state_from_text(read_text_file(path), path);
}

std::string verdict_csv_header() {
  return "mu,g1,classification,alpha_g,beta_g,min_product_re,has_complex,lambda_growth,mu_s,"
         "band_lo,band_hi";
}

std::string verdict_csv_row(const StationaryState& state, const StabilityVerdict& v) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double lo = v.instability_band ? v.instability_band->lo : nan;
  const double hi = v.instability_band ? v.instability_band->hi : nan;
  std::string out;
  out += format_double(state.mu) + "," + format_double(state.g1) + "," +
         stability_name(v.classification) + "," + format_double(v.alpha_g) + "," +
         format_double(v.beta_g) + "," + format_double(v.min_product_eigenvalue_real_part) +
         "," + (v.has_complex_product_eigenvalue ? "1" : "0") + "," +
         format_double(v.lambda_growth) + "," + format_double(v.mu_s) + "," +
         format_double(lo) + "," + format_double(hi);
  return out;
}

std::string verdict_text(const StationaryState& state, const StabilityVerdict& v) {
  std::ostringstream out;
  out << "classification = " << stability_name(v.classification) << "\n"
      << "route = " << v.route << "\n"
      << "mu = " << format_double(state.mu) << "\n"
      << "g1 = " << format_double(state.g1) << "\n"
      << "alpha_g = " << format_double(v.alpha_g) << "\n"
      << "beta_g = " << format_double(v.beta_g) << "\n"
      << "min_product_eigenvalue_real_part = "
      << format_double(v.min_product_eigenvalue_real_part) << "\n"
      << "has_complex_product_eigenvalue = " << (v.has_complex_product_eigenvalue ? 1 : 0)
      << "\n"
      << "lambda_growth = " << format_double(v.lambda_growth) << "\n"
      << "mu_s = " << format_double(v.mu_s) << "\n";
  if (v.instability_band) {
    out << "band_lo = " << format_double(v.instability_band->lo) << "\n"
        << "band_hi = " << format_double(v.instability_band->hi) << "\n";
  } else {
    out << "band_lo = none\nband_hi = none\n";
  }
  out << "eps = " << format_double(v.eps) << "\n";
  return out.str();
}

std::string trajectory_csv(const PerturbationTrajectory& traj) {
  std::string out = "time,norm_phi1,norm_phi2\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    out += format_double(traj.times[i]) + "," + format_double(traj.norm_phi1[i]) + "," +
           format_double(traj.norm_phi2[i]) + "\n";
  }
  return out;
}

std::string gpe_trajectory_csv(const GpeTrajectory& traj) {
  std::string out = "time,norm,energy\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    out += format_double(traj.times[i]) + "," + format_double(traj.norm[i]) + "," +
           format_double(traj.energy[i]) + "\n";
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file '" + path + "'");
  out << content;
  if (!out) throw ConfigError("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace gpelab
