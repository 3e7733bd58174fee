#include "mmw/statespec.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mmw/oracle.hpp"

namespace mmw {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw spec_error("state spec, field '" + where + "': " + what);
}

const json& field(const json& j, const std::string& name,
                  const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(name);
  if (it == j.end()) fail(where + "." + name, "missing");
  return *it;
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

cplx complex_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number())
    fail(where, "complex values are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::size_t nonneg_int_at(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    fail(where, "expected a nonnegative integer");
  return static_cast<std::size_t>(j.get<long long>());
}

std::vector<std::size_t> cutoff_list(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array");
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 2)
      fail(where, "cutoffs are integers >= 2");
    out.push_back(static_cast<std::size_t>(v.get<long long>()));
  }
  return out;
}

ordered_json complex_to_json(cplx z) {
  return ordered_json::array({z.real(), z.imag()});
}

struct SpecContext {
  StateOptions opt;
};

// Recursive builder; `where` tracks the field path for diagnostics.
FockState build_impl(const json& spec, const std::string& where,
                     SpecContext& ctx, ordered_json& resolved);

std::vector<std::size_t> resolve_cutoffs(const json& spec,
                                         const std::string& where,
                                         std::size_t modes,
                                         std::size_t fallback) {
  if (spec.contains("shape")) {
    const json& shape = spec["shape"];
    if (shape.contains("cutoffs"))
      return cutoff_list(shape["cutoffs"], where + ".shape.cutoffs");
  }
  return std::vector<std::size_t>(modes, fallback);
}

std::size_t even_up(double x) {
  std::size_t v = static_cast<std::size_t>(std::ceil(x));
  return v + (v % 2);
}

FockState build_impl(const json& spec, const std::string& where,
                     SpecContext& ctx, ordered_json& resolved) {
  const json& ctor_j = field(spec, "constructor", where);
  if (!ctor_j.is_string()) fail(where + ".constructor", "expected a string");
  const std::string ctor = ctor_j.get<std::string>();
  const json params = spec.value("params", json::object());
  const std::string pwhere = where + ".params";

  resolved["constructor"] = ctor;

  auto finish = [&](FockState s,
                    const std::vector<std::size_t>& cutoffs) -> FockState {
    resolved["cutoffs"] = cutoffs;
    resolved["leakage"] = s.leakage();
    return s;
  };

  if (ctor == "coherent") {
    const json& aj = field(params, "alpha", pwhere);
    if (!aj.is_array() || aj.empty()) fail(pwhere + ".alpha", "array needed");
    std::vector<cplx> alpha;
    for (std::size_t m = 0; m < aj.size(); ++m)
      alpha.push_back(
          complex_at(aj[m], pwhere + ".alpha[" + std::to_string(m) + "]"));
    std::vector<std::size_t> cutoffs =
        resolve_cutoffs(spec, where, alpha.size(), 0);
    for (std::size_t m = 0; m < alpha.size(); ++m)
      if (cutoffs[m] == 0)
        cutoffs[m] = std::max<std::size_t>(
            16, static_cast<std::size_t>(
                    std::ceil(6.0 * std::norm(alpha[m]) + 10.0)));
    resolved["alpha"] = ordered_json::array();
    for (cplx a : alpha) resolved["alpha"].push_back(complex_to_json(a));
    return finish(make_coherent(ModeShape(cutoffs), alpha, ctx.opt), cutoffs);
  }
  if (ctor == "fock") {
    const json& nj = field(params, "n", pwhere);
    if (!nj.is_array() || nj.empty()) fail(pwhere + ".n", "array needed");
    std::vector<std::size_t> occ;
    for (const auto& v : nj) occ.push_back(nonneg_int_at(v, pwhere + ".n"));
    std::vector<std::size_t> cutoffs =
        resolve_cutoffs(spec, where, occ.size(), 0);
    for (std::size_t m = 0; m < occ.size(); ++m)
      if (cutoffs[m] == 0) cutoffs[m] = occ[m] + 8;
    resolved["n"] = occ;
    return finish(make_fock(ModeShape(cutoffs), occ), cutoffs);
  }
  if (ctor == "thermal") {
    const json& nj = field(params, "nbar", pwhere);
    if (!nj.is_array() || nj.empty()) fail(pwhere + ".nbar", "array needed");
    std::vector<double> nbar;
    for (std::size_t m = 0; m < nj.size(); ++m)
      nbar.push_back(
          number_at(nj[m], pwhere + ".nbar[" + std::to_string(m) + "]"));
    std::vector<std::size_t> cutoffs =
        resolve_cutoffs(spec, where, nbar.size(), 0);
    for (std::size_t m = 0; m < nbar.size(); ++m)
      if (cutoffs[m] == 0)
        cutoffs[m] = std::max<std::size_t>(
            24, static_cast<std::size_t>(std::ceil(36.0 * nbar[m] + 24.0)));
    resolved["nbar"] = nbar;
    return finish(make_thermal(ModeShape(cutoffs), nbar, ctx.opt), cutoffs);
  }
  if (ctor == "squeezed_vacuum") {
    const double r = number_at(field(params, "r", pwhere), pwhere + ".r");
    const double theta = params.contains("theta")
                             ? number_at(params["theta"], pwhere + ".theta")
                             : 0.0;
    std::vector<std::size_t> cutoffs = resolve_cutoffs(spec, where, 1, 0);
    if (cutoffs[0] == 0)
      cutoffs[0] = std::max<std::size_t>(
          24, even_up(12.0 * std::cosh(r) * std::cosh(r)));
    resolved["r"] = r;
    resolved["theta"] = theta;
    return finish(make_sq_vac(ModeShape(cutoffs), r, theta, ctx.opt),
                  cutoffs);
  }
  if (ctor == "tmsv") {
    const double r = number_at(field(params, "r", pwhere), pwhere + ".r");
    std::vector<std::size_t> cutoffs = resolve_cutoffs(spec, where, 2, 0);
    for (auto& d : cutoffs)
      if (d == 0)
        d = std::max<std::size_t>(
            24, static_cast<std::size_t>(
                    std::ceil(12.0 * std::cosh(r) * std::cosh(r))));
    resolved["r"] = r;
    return finish(make_tmsv(ModeShape(cutoffs), r, ctx.opt), cutoffs);
  }
  if (ctor == "tensor") {
    const json& parts = field(params, "parts", pwhere);
    if (!parts.is_array() || parts.size() < 2)
      fail(pwhere + ".parts", "need at least two parts");
    resolved["parts"] = ordered_json::array();
    ordered_json r0;
    FockState acc = build_impl(parts[0], pwhere + ".parts[0]", ctx, r0);
    resolved["parts"].push_back(r0);
    for (std::size_t k = 1; k < parts.size(); ++k) {
      ordered_json rk;
      acc = tensor(acc, build_impl(parts[k],
                                   pwhere + ".parts[" + std::to_string(k) +
                                       "]",
                                   ctx, rk));
      resolved["parts"].push_back(rk);
    }
    resolved["cutoffs"] = acc.shape().cutoffs();
    resolved["leakage"] = acc.leakage();
    return acc;
  }
  if (ctor == "mixture") {
    const json& comps = field(params, "components", pwhere);
    if (!comps.is_array() || comps.empty())
      fail(pwhere + ".components", "need at least one component");
    std::vector<std::pair<double, FockState>> parts;
    resolved["components"] = ordered_json::array();
    for (std::size_t k = 0; k < comps.size(); ++k) {
      const std::string cw =
          pwhere + ".components[" + std::to_string(k) + "]";
      const double w = number_at(field(comps[k], "weight", cw), cw + ".weight");
      ordered_json rk;
      rk["weight"] = w;
      parts.emplace_back(
          w, build_impl(field(comps[k], "state", cw), cw + ".state", ctx, rk));
      resolved["components"].push_back(rk);
    }
    FockState s = mix(parts);
    resolved["cutoffs"] = s.shape().cutoffs();
    resolved["leakage"] = s.leakage();
    return s;
  }
  if (ctor == "raw_amplitudes" || ctor == "raw_density") {
    if (!spec.contains("shape") || !spec["shape"].contains("cutoffs"))
      fail(where + ".shape.cutoffs", "required for raw states");
    const std::vector<std::size_t> cutoffs =
        cutoff_list(spec["shape"]["cutoffs"], where + ".shape.cutoffs");
    const ModeShape shape(cutoffs);
    if (ctor == "raw_amplitudes") {
      const json& aj = field(params, "amplitudes", pwhere);
      if (!aj.is_array() || aj.size() != shape.dim())
        fail(pwhere + ".amplitudes",
             "expected " + std::to_string(shape.dim()) + " entries");
      std::vector<cplx> amp;
      for (std::size_t k = 0; k < aj.size(); ++k)
        amp.push_back(complex_at(
            aj[k], pwhere + ".amplitudes[" + std::to_string(k) + "]"));
      return finish(FockState::pure(shape, std::move(amp), ctx.opt), cutoffs);
    }
    const json& mj = field(params, "matrix", pwhere);
    if (!mj.is_array() || mj.size() != shape.dim())
      fail(pwhere + ".matrix",
           "expected " + std::to_string(shape.dim()) + " rows");
    std::vector<cplx> rho;
    rho.reserve(shape.dim() * shape.dim());
    for (std::size_t i = 0; i < mj.size(); ++i) {
      const json& row = mj[i];
      if (!row.is_array() || row.size() != shape.dim())
        fail(pwhere + ".matrix[" + std::to_string(i) + "]",
             "expected " + std::to_string(shape.dim()) + " entries");
      for (std::size_t j = 0; j < row.size(); ++j)
        rho.push_back(complex_at(row[j], pwhere + ".matrix[" +
                                             std::to_string(i) + "][" +
                                             std::to_string(j) + "]"));
    }
    FockState s = FockState::density(shape, std::move(rho), ctx.opt);
    // raw input: enforce the density invariants in full
    const Eigen::VectorXd ev = oracle::eigenvalues(s);
    if (ev.minCoeff() < -1e-10)
      fail(pwhere + ".matrix", "density operator has eigenvalue " +
                                   std::to_string(ev.minCoeff()));
    return finish(std::move(s), cutoffs);
  }
  fail(where + ".constructor",
       "unknown constructor '" + ctor +
           "' (valid: coherent, fock, thermal, squeezed_vacuum, tmsv, "
           "tensor, mixture, raw_amplitudes, raw_density)");
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw spec_error("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw spec_error("'" + path + "' is not valid JSON: " + e.what());
  }
}

BuiltState build_state(const json& spec) {
  if (!spec.is_object()) throw spec_error("state spec must be a JSON object");
  const int version = spec.value("schema_version", 1);
  if (version != 1)
    throw spec_error("unsupported schema_version " + std::to_string(version));
  SpecContext ctx;
  ctx.opt.leakage_tol = spec.value("leakage_tol", 1e-6);
  ctx.opt.override_cutoff_guard = spec.value("override_cutoff_guard", false);

  ordered_json resolved;
  resolved["schema_version"] = version;
  resolved["leakage_tol"] = ctx.opt.leakage_tol;
  ordered_json inner;
  FockState s = build_impl(spec, "$", ctx, inner);
  for (auto& [k, v] : inner.items()) resolved[k] = v;
  if (spec.contains("provenance")) resolved["provenance"] = spec["provenance"];
  return BuiltState{std::move(s), std::move(resolved)};
}

CorrelationGrid parse_grid(const json& doc) {
  if (!doc.is_object()) throw spec_error("grid must be a JSON object");
  const int version = doc.value("schema_version", 1);
  if (version != 1)
    throw spec_error("unsupported schema_version " + std::to_string(version));
  CorrelationGrid g;
  const json& ts = field(doc, "ts", "$");
  const json& taus = field(doc, "taus", "$");
  const json& g2 = field(doc, "g2", "$");
  for (const auto& v : ts) g.ts.push_back(number_at(v, "$.ts"));
  for (const auto& v : taus) g.taus.push_back(number_at(v, "$.taus"));
  for (const auto& row : g2) {
    g.g2.emplace_back();
    for (const auto& v : row) g.g2.back().push_back(number_at(v, "$.g2"));
  }
  if (doc.contains("g1"))
    for (const auto& v : doc["g1"]) g.g1.push_back(number_at(v, "$.g1"));
  g.stationary = doc.value("stationary", false);
  try {
    g.validate();
  } catch (const error& e) {
    throw spec_error(std::string("grid: ") + e.what());
  }
  return g;
}

std::string digest_bytes(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << h;
  return out.str();
}

std::string digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw spec_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return digest_bytes(buf.str());
}

}  // namespace mmw
