#include "specglue/specglue.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

#include "core/report.hpp"
#include "core/runs.hpp"
#include "core/spectra.hpp"

namespace {

thread_local std::string g_last_error;

sg_status status_of(const sg::Error& e) {
  switch (e.code()) {
    case sg::ErrorCode::InvalidArgument: return SG_ERR_INVALID_ARGUMENT;
    case sg::ErrorCode::Parse: return SG_ERR_PARSE;
    case sg::ErrorCode::Invariant: return SG_ERR_INVARIANT;
    case sg::ErrorCode::Unsupported: return SG_ERR_UNSUPPORTED;
    case sg::ErrorCode::Io: return SG_ERR_IO;
    case sg::ErrorCode::Tolerance: return SG_ERR_TOLERANCE;
    case sg::ErrorCode::Internal: return SG_ERR_INTERNAL;
  }
  return SG_ERR_INTERNAL;
}

template <class F>
sg_status guarded(F&& f) {
  try {
    f();
    return SG_OK;
  } catch (const sg::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return SG_ERR_INTERNAL;
  }
}

std::vector<sg::Bc> bcs_from_name(const char* bc) {
  if (bc == nullptr) sg::fail(sg::ErrorCode::InvalidArgument, "missing bc");
  std::string name(bc);
  if (name == "all")
    return {sg::Bc::PMinusL0, sg::Bc::PPlusL1, sg::Bc::Rel, sg::Bc::Abs};
  return {sg::bc_from_name(name)};
}

std::vector<int> qs_for(const sg::BoundarySpectrum& s, int q) {
  if (q >= 0) return {q};
  std::vector<int> out;
  for (int i = 0; i <= s.dimension(); ++i) out.push_back(i);
  return out;
}

sg_status copy_text(const std::string& text, char* buf, size_t bufsize) {
  if (buf == nullptr || bufsize == 0) {
    g_last_error = "zero-sized output buffer";
    return SG_ERR_INVALID_ARGUMENT;
  }
  std::size_t n = std::min(text.size(), bufsize - 1);
  std::memcpy(buf, text.data(), n);
  buf[n] = '\0';
  return text.size() < bufsize ? SG_OK : SG_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct sg_spectrum {
  sg::BoundarySpectrum impl;
};

struct sg_report {
  sg::Report impl;
};

extern "C" {

const char* sg_version(void) { return sg::version_string(); }

const char* sg_last_error(void) { return g_last_error.c_str(); }

sg_status sg_spectrum_torus(double L1, double L2, double alpha, double beta,
                            double cutoff, int require_acyclic, sg_spectrum** out) {
  if (out == nullptr) return SG_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    auto s = sg::BoundarySpectrum::twisted_torus(L1, L2, alpha, beta, cutoff,
                                                 require_acyclic != 0);
    *out = new sg_spectrum{std::move(s)};
  });
}

sg_status sg_spectrum_load(const char* path, sg_spectrum** out) {
  if (out == nullptr || path == nullptr) return SG_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new sg_spectrum{sg::BoundarySpectrum::load(path)}; });
}

sg_status sg_spectrum_save(const sg_spectrum* s, const char* path) {
  if (s == nullptr || path == nullptr) return SG_ERR_INVALID_ARGUMENT;
  return guarded([&] { s->impl.save(path); });
}

sg_status sg_spectrum_truncate(const sg_spectrum* s, double lambda_cap,
                               sg_spectrum** out) {
  if (s == nullptr || out == nullptr) return SG_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new sg_spectrum{s->impl.truncated(lambda_cap)}; });
}

size_t sg_spectrum_mode_count(const sg_spectrum* s) {
  return s ? s->impl.mode_count() : 0;
}

double sg_spectrum_tail_estimate(const sg_spectrum* s) {
  return s ? s->impl.tail_estimate() : 0.0;
}

int sg_spectrum_dimension(const sg_spectrum* s) {
  return s ? s->impl.dimension() : 0;
}

int sg_spectrum_acyclic(const sg_spectrum* s) {
  return (s && s->impl.acyclic()) ? 1 : 0;
}

void sg_spectrum_free(sg_spectrum* s) { delete s; }

sg_status sg_run_det(const sg_spectrum* s, const char* bc, int q, const double* r,
                     size_t nr, double tol, sg_report** out) {
  if (s == nullptr || out == nullptr || r == nullptr || nr == 0)
    return SG_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    std::vector<double> rs(r, r + nr);
    auto rep = sg::run_det(s->impl, bcs_from_name(bc), qs_for(s->impl, q), rs, tol);
    *out = new sg_report{std::move(rep)};
  });
}

sg_status sg_run_glue(const sg_spectrum* s, const char* bc, int q, double r, double L,
                      double tol, sg_report** out) {
  if (s == nullptr || out == nullptr) return SG_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    auto rep = sg::run_glue(s->impl, bcs_from_name(bc), qs_for(s->impl, q), r, L, tol);
    *out = new sg_report{std::move(rep)};
  });
}

sg_status sg_run_adiabatic(const sg_spectrum* s, const double* r, size_t nr,
                           double tol, sg_report** out) {
  if (s == nullptr || out == nullptr || r == nullptr || nr == 0)
    return SG_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    std::vector<double> rs(r, r + nr);
    *out = new sg_report{sg::run_adiabatic(s->impl, rs, tol)};
  });
}

sg_status sg_run_flow(int dim, int paths, unsigned long long seed, double tol,
                      sg_report** out) {
  if (out == nullptr) return SG_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new sg_report{sg::run_flow(dim, paths, seed, tol)}; });
}

sg_status sg_run_torsion(const sg_spectrum* s, double r, double L, double twist,
                         double tol, sg_report** out) {
  if (s == nullptr || out == nullptr) return SG_ERR_INVALID_ARGUMENT;
  return guarded(
      [&] { *out = new sg_report{sg::run_torsion(s->impl, r, L, twist, tol)}; });
}

size_t sg_report_rows(const sg_report* rep) { return rep ? rep->impl.row_count() : 0; }

size_t sg_report_cols(const sg_report* rep) {
  return rep ? rep->impl.columns().size() : 0;
}

const char* sg_report_column(const sg_report* rep, size_t j) {
  if (rep == nullptr || j >= rep->impl.columns().size()) return nullptr;
  return rep->impl.columns()[j].c_str();
}

sg_status sg_report_cell(const sg_report* rep, size_t i, size_t j, char* buf,
                         size_t bufsize) {
  if (rep == nullptr) return SG_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const auto& row = rep->impl.row(i);
    if (j >= row.size()) sg::fail(sg::ErrorCode::InvalidArgument, "column out of range");
    std::string text = std::holds_alternative<double>(row[j])
                           ? sg::format_double(std::get<double>(row[j]))
                           : std::get<std::string>(row[j]);
    if (copy_text(text, buf, bufsize) != SG_OK)
      sg::fail(sg::ErrorCode::InvalidArgument, "output buffer too small");
  });
}

double sg_report_number(const sg_report* rep, size_t i, size_t j) {
  if (rep == nullptr || i >= rep->impl.row_count())
    return std::numeric_limits<double>::quiet_NaN();
  const auto& row = rep->impl.row(i);
  if (j >= row.size() || !std::holds_alternative<double>(row[j]))
    return std::numeric_limits<double>::quiet_NaN();
  return std::get<double>(row[j]);
}

int sg_report_pass(const sg_report* rep) { return (rep && rep->impl.pass()) ? 1 : 0; }

sg_status sg_report_write(const sg_report* rep, const char* path, const char* format) {
  if (rep == nullptr || path == nullptr || format == nullptr)
    return SG_ERR_INVALID_ARGUMENT;
  return guarded([&] { rep->impl.write(path, format); });
}

size_t sg_report_meta_count(const sg_report* rep) {
  return rep ? rep->impl.meta().size() : 0;
}

sg_status sg_report_meta(const sg_report* rep, size_t i, char* key, size_t keysize,
                         char* value, size_t valuesize) {
  if (rep == nullptr) return SG_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    if (i >= rep->impl.meta().size())
      sg::fail(sg::ErrorCode::InvalidArgument, "meta index out of range");
    const auto& kv = rep->impl.meta()[i];
    if (copy_text(kv.first, key, keysize) != SG_OK ||
        copy_text(kv.second, value, valuesize) != SG_OK)
      sg::fail(sg::ErrorCode::InvalidArgument, "output buffer too small");
  });
}

void sg_report_free(sg_report* rep) { delete rep; }

}  // extern "C"
