#include "qwork/io.hpp"

#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace qwork::io {

namespace {

using nlohmann::json;

constexpr double kLoadPsdTol = 1e-8;

[[noreturn]] void fail(const std::string& ctx, const std::string& what) {
  throw std::invalid_argument(ctx + ": " + what);
}

// Inline documents start with '[' or '{'; anything else is a file path.
json parse_source(const std::string& source, std::string& ctx) {
  const size_t first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos &&
      (source[first] == '[' || source[first] == '{')) {
    ctx = "inline document";
    try {
      return json::parse(source);
    } catch (const json::parse_error& e) {
      fail(ctx, e.what());
    }
  }
  ctx = source;
  std::ifstream in(source);
  if (!in) fail(ctx, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ctx, e.what());
  }
}

const json& field(const json& doc, const char* name, const std::string& ctx) {
  if (!doc.is_object()) fail(ctx, "document must be a JSON object");
  const auto it = doc.find(name);
  if (it == doc.end()) fail(ctx, std::string("missing field '") + name + "'");
  return *it;
}

int positive_int(const json& j, const std::string& ctx, const char* name) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    fail(ctx, std::string("field '") + name + "' must be a positive integer");
  }
  return static_cast<int>(j.get<long long>());
}

Eigen::VectorXd weight_array(const json& j, const std::string& ctx,
                             const char* name) {
  if (!j.is_array() || j.empty()) {
    fail(ctx, std::string("field '") + name + "' must be a nonempty array");
  }
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      fail(ctx, std::string("field '") + name + "' must contain numbers only");
    }
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

qmat::ComplexMatrix entry_matrix(const json& j, int rows, int cols,
                                 const std::string& ctx, const char* name) {
  const size_t expect = static_cast<size_t>(rows) * static_cast<size_t>(cols);
  if (!j.is_array() || j.size() != expect) {
    fail(ctx, std::string("field '") + name + "' must be an array of " +
                  std::to_string(expect) + " [re, im] pairs (row-major)");
  }
  qmat::ComplexMatrix m(rows, cols);
  for (size_t i = 0; i < expect; ++i) {
    const json& cell = j[i];
    if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
        !cell[1].is_number()) {
      fail(ctx, std::string("field '") + name +
                    "' entries must be [re, im] number pairs");
    }
    m(static_cast<Eigen::Index>(i / cols), static_cast<Eigen::Index>(i % cols)) =
        qmat::Complex(cell[0].get<double>(), cell[1].get<double>());
  }
  return m;
}

json matrix_entries(const qmat::ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
  return out;
}

Eigen::VectorXd spectrum_weights(const json& doc, const std::string& ctx) {
  if (doc.is_array()) return weight_array(doc, ctx, "spectrum");
  return weight_array(field(doc, "spectrum", ctx), ctx, "spectrum");
}

majorize::Spectrum checked_spectrum(const Eigen::VectorXd& w,
                                    const std::string& ctx) {
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!(w(i) >= 0.0)) fail(ctx, "field 'spectrum' has a negative weight");
  }
  if (std::abs(w.sum() - 1.0) > 1e-9) {
    fail(ctx, "field 'spectrum' must sum to 1 (got " +
                  std::to_string(w.sum()) + ")");
  }
  return majorize::Spectrum::make(w);
}

std::vector<int> dims_list(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty()) {
    fail(ctx, "field 'dims' must be a nonempty array of positive integers");
  }
  std::vector<int> dims;
  for (const json& d : j) dims.push_back(positive_int(d, ctx, "dims"));
  return dims;
}

qmat::DensityOperator state_from(const json& doc, const std::string& ctx) {
  if (doc.is_array() || (doc.is_object() && doc.contains("spectrum"))) {
    const Eigen::VectorXd raw = spectrum_weights(doc, ctx);
    checked_spectrum(raw, ctx);  // validation only; keep the document order
    const int n = static_cast<int>(raw.size());
    qmat::ComplexMatrix m = qmat::ComplexMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = std::max(raw(i), 0.0);
    std::vector<int> dims{n};
    if (doc.is_object() && doc.contains("dims")) {
      dims = dims_list(doc.at("dims"), ctx);
      long long total = 1;
      for (int d : dims) total *= d;
      if (total != n)
        fail(ctx, "field 'dims' does not match the spectrum length");
    }
    return qmat::DensityOperator::make(std::move(m), std::move(dims));
  }
  const std::vector<int> dims = dims_list(field(doc, "dims", ctx), ctx);
  long long total = 1;
  for (int d : dims) total *= d;
  if (total > 1 << 12) fail(ctx, "field 'dims' is too large to load");
  qmat::ComplexMatrix m =
      entry_matrix(field(doc, "entries", ctx), static_cast<int>(total),
                   static_cast<int>(total), ctx, "entries");
  if (qmat::hermiticity_defect(m) > 1e-9) {
    fail(ctx, "field 'entries' is not a Hermitian matrix");
  }
  try {
    return qmat::DensityOperator::make(std::move(m), dims);
  } catch (const std::invalid_argument& e) {
    fail(ctx, std::string("field 'entries': ") + e.what());
  }
}

json state_doc(const qmat::DensityOperator& rho) {
  return json{{"dims", rho.dims}, {"entries", matrix_entries(rho.matrix)}};
}

void write_doc(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) fail(path, "cannot write file");
  out << doc.dump(2) << '\n';
  if (!out) fail(path, "write failed");
}

}  // namespace

majorize::Spectrum load_spectrum(const std::string& source) {
  std::string ctx;
  const json doc = parse_source(source, ctx);
  if (!doc.is_array() && !(doc.is_object() && doc.contains("spectrum"))) {
    fail(ctx, "expected a bare array or a document with field 'spectrum'");
  }
  return checked_spectrum(spectrum_weights(doc, ctx), ctx);
}

qmat::DensityOperator load_state(const std::string& source) {
  std::string ctx;
  const json doc = parse_source(source, ctx);
  return state_from(doc, ctx);
}

channel::ChoiMap load_channel(const std::string& source) {
  std::string ctx;
  const json doc = parse_source(source, ctx);
  const int dim_in = positive_int(field(doc, "dim_in", ctx), ctx, "dim_in");
  const int dim_out = positive_int(field(doc, "dim_out", ctx), ctx, "dim_out");
  if (static_cast<long long>(dim_in) * dim_out > 1 << 10) {
    fail(ctx, "channel dimensions are too large to load");
  }
  const int n = dim_in * dim_out;
  qmat::ComplexMatrix m =
      entry_matrix(field(doc, "choi", ctx), n, n, ctx, "choi");

  if (qmat::hermiticity_defect(m) > kLoadPsdTol) {
    fail(ctx, "field 'choi' is not a Hermitian matrix");
  }
  m = 0.5 * (m + m.adjoint().eval());
  const qmat::Eigensystem eig = qmat::eig_hermitian(m);
  const double top = std::max(1.0, eig.values(0));
  if (eig.values(eig.values.size() - 1) < -kLoadPsdTol * top) {
    fail(ctx,
         "field 'choi' is not positive semidefinite (the map is not "
         "completely positive)");
  }
  // Clean sub-tolerance negative directions so downstream consumers see an
  // exact cone member.
  qmat::ComplexMatrix cleaned = qmat::ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    const double lam = eig.values(k);
    if (lam <= 0.0) continue;
    cleaned += lam * (eig.vectors.col(k) * eig.vectors.col(k).adjoint());
  }
  return channel::ChoiMap::make(std::move(cleaned), dim_in, dim_out);
}

void save_state(const std::string& path, const qmat::DensityOperator& rho) {
  write_doc(path, state_doc(rho));
}

void save_channel(const std::string& path, const channel::ChoiMap& chan) {
  write_doc(path, json{{"dim_in", chan.dim_in},
                       {"dim_out", chan.dim_out},
                       {"choi", matrix_entries(chan.choi)}});
}

void save_work_dump(const std::string& path, const WorkDump& dump) {
  json doc{{"kind", "work_certificate"},
           {"sigma", state_doc(dump.sigma_xr)},
           {"rho", state_doc(dump.rho_xpr)},
           {"alpha", dump.alpha},
           {"t_choi", matrix_entries(dump.t_choi)},
           {"omega", matrix_entries(dump.certificate.omega)},
           {"x_block", matrix_entries(dump.certificate.x_block)},
           {"z_block", matrix_entries(dump.certificate.z_block)}};
  if (!dump.block_dims.empty()) doc["blocks"] = dump.block_dims;
  doc["constraints"] = dump.constraint_count;
  doc["iterations"] = dump.iterations;
  write_doc(path, doc);
}

WorkDump load_work_dump(const std::string& source) {
  std::string ctx;
  const json doc = parse_source(source, ctx);
  if (!doc.is_object() || doc.value("kind", "") != "work_certificate") {
    fail(ctx, "field 'kind' must be \"work_certificate\"");
  }

  WorkDump dump;
  dump.sigma_xr = state_from(field(doc, "sigma", ctx), ctx + ": sigma");
  dump.rho_xpr = state_from(field(doc, "rho", ctx), ctx + ": rho");
  if (dump.sigma_xr.dims.size() != 2 || dump.rho_xpr.dims.size() != 2 ||
      dump.sigma_xr.dims[1] != dump.rho_xpr.dims[1]) {
    fail(ctx,
         "fields 'sigma' and 'rho' must both be bipartite with a matching "
         "reference factor");
  }
  const int dx = dump.sigma_xr.dims[0];
  const int dr = dump.sigma_xr.dims[1];
  const int dxp = dump.rho_xpr.dims[0];

  const json& alpha = field(doc, "alpha", ctx);
  if (!alpha.is_number()) fail(ctx, "field 'alpha' must be a number");
  dump.alpha = alpha.get<double>();

  dump.t_choi = entry_matrix(field(doc, "t_choi", ctx), dx * dxp, dx * dxp,
                             ctx, "t_choi");
  dump.certificate.omega =
      entry_matrix(field(doc, "omega", ctx), dxp, dxp, ctx, "omega");
  dump.certificate.x_block =
      entry_matrix(field(doc, "x_block", ctx), dx, dx, ctx, "x_block");
  dump.certificate.z_block = entry_matrix(field(doc, "z_block", ctx),
                                          dxp * dr, dxp * dr, ctx, "z_block");

  if (doc.contains("blocks")) {
    for (const json& b : doc.at("blocks"))
      dump.block_dims.push_back(positive_int(b, ctx, "blocks"));
  }
  for (auto [name, slot] :
       {std::pair{"constraints", &dump.constraint_count},
        std::pair{"iterations", &dump.iterations}}) {
    if (!doc.contains(name)) continue;
    const json& j = doc.at(name);
    if (!j.is_number_integer() || j.get<long long>() < 0) {
      fail(ctx, std::string("field '") + name +
                    "' must be a nonnegative integer");
    }
    *slot = static_cast<int>(j.get<long long>());
  }
  return dump;
}

}  // namespace qwork::io
