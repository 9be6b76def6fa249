#pragma once

#include <string>
#include <vector>

#include "qwork/channel.hpp"
#include "qwork/majorize.hpp"
#include "qwork/qmat.hpp"
#include "qwork/sdp.hpp"

/// JSON document formats shared by the command-line tool and the library.
///
/// Every loader accepts either a file path or an inline JSON document (the
/// argument counts as inline when its first non-space character is '[' or
/// '{').  All complex matrices are stored row-major as arrays of [re, im]
/// pairs.  Document shapes:
///
///   state     {"dims": [d1, d2, ...], "entries": [[re, im], ...]}
///             or {"spectrum": [p1, p2, ...]} (a diagonal state in document
///             order, with optional "dims"), or a bare array of weights.
///             Density payloads must be Hermitian, positive semidefinite,
///             and normalized.
///   spectrum  {"spectrum": [...]} or a bare array; weights must be
///             nonnegative and sum to one.
///   channel   {"dim_in": n, "dim_out": m, "choi": [[re, im], ...]} with the
///             Choi matrix input-major; verified positive semidefinite
///             within 1e-8 and cleaned to the cone before use.
///   certificate dump   {"kind": "work_certificate", "sigma": state,
///             "rho": state, "alpha": a, "t_choi": [...], "omega": [...],
///             "x_block": [...], "z_block": [...]} plus optional solver
///             diagnostics {"blocks": [...], "constraints": n,
///             "iterations": k}.
///
/// Loaders throw std::invalid_argument naming the document and the offending
/// field; writers throw std::invalid_argument when the file cannot be
/// written.
namespace qwork::io {

majorize::Spectrum load_spectrum(const std::string& source);

qmat::DensityOperator load_state(const std::string& source);

channel::ChoiMap load_channel(const std::string& source);

void save_state(const std::string& path, const qmat::DensityOperator& rho);

void save_channel(const std::string& path, const channel::ChoiMap& chan);

/// Everything needed to replay a work-cost optimality certificate offline:
/// the instance pair, the claimed optimum, the transfer channel, the dual
/// witness, and (optionally) solver provenance for debugging.
struct WorkDump {
  qmat::DensityOperator sigma_xr;  // input purification, dims {d_X, d_R}
  qmat::DensityOperator rho_xpr;   // processed state, dims {d_X', d_R}
  double alpha = 0.0;
  qmat::ComplexMatrix t_choi;  // transfer channel, input-major Choi
  sdp::DualCertificate certificate;
  std::vector<int> block_dims;  // diagnostics; empty when not recorded
  int constraint_count = 0;
  int iterations = 0;
};

void save_work_dump(const std::string& path, const WorkDump& dump);

WorkDump load_work_dump(const std::string& source);

}  // namespace qwork::io
