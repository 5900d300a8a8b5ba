#pragma once

namespace ncrsim::kernels {

// Batch evaluation of the grid-search inner loops. The scalar reference
// kernels define the arithmetic; the AVX2 variants mirror the exact
// operation order so results are bitwise identical to evaluating the
// linkbudget/powermodel compositions one configuration at a time.
// log2 is deliberately left to the caller (scalar in all paths).

// Direct objective, batched over gNB PA output candidates:
//   snr[i]   = (p[i] * ntx2) * nrx / den
//   pa_raw   = ((ntx_d * p[i]) / ref_tx) * inv_eta[i] * diff
//   power[i] = base + beta * pa_raw
struct DirectBatchCtx {
  double ntx2 = 0;   // n_tx^2
  double nrx = 0;    // UE receive elements
  double den = 0;    // PL * NF * N0 * BW
  double ntx_d = 0;  // n_tx
  double ref_tx = 0; // RefTxPower per RU, mW
  double diff = 0;   // P_active,DL - P_ms
  double beta = 0;
  double base = 0;   // P_ms + alpha * P_nonPA
};

// Indirect objective, batched over NCR max PA output candidates:
//   pa[i]    = min(pmax[i], lim)
//   inv_e    = pmax[i] <= lim ? inv_eta_pm[i] : inv_eta_lim
//   ac       = (pa[i] * ntx2_ncr) * nrx_ue / den_ac
//   eff[i]   = ac / (1 + (1 + ac) / snr_bh)
//   tx       = ((ntxd_ncr * pa[i]) / ncr_ref) * inv_e * xi_pad
//   power[i] = gnb_total + (ncr_base + tx)
struct IndirectBatchCtx {
  double lim = 0;         // gain-limited PA output, Eq. 4 second branch
  double inv_eta_lim = 0; // 1 / eta(lim)
  double snr_bh = 0;
  double ntx2_ncr = 0;
  double nrx_ue = 0;
  double den_ac = 0;      // PL_AC * NF_UE * N0 * BW
  double ntxd_ncr = 0;
  double ncr_ref = 0;     // NCR reference Tx power, mW
  double xi_pad = 0;      // xi * P_active,DL
  double ncr_base = 0;    // P_const + P_Rx
  double gnb_total = 0;
};

using DirectBatchFn = void (*)(const double* paout, const double* inv_eta,
                               int n, const DirectBatchCtx& ctx,
                               double* snr_out, double* power_out);
using IndirectBatchFn = void (*)(const double* pmax, const double* inv_eta_pm,
                                 int n, const IndirectBatchCtx& ctx,
                                 double* eff_out, double* power_out);

void direct_batch_scalar(const double* paout, const double* inv_eta, int n,
                         const DirectBatchCtx& ctx, double* snr_out,
                         double* power_out);
void indirect_batch_scalar(const double* pmax, const double* inv_eta_pm, int n,
                           const IndirectBatchCtx& ctx, double* eff_out,
                           double* power_out);

#if defined(__x86_64__) || defined(_M_X64)
void direct_batch_avx2(const double* paout, const double* inv_eta, int n,
                       const DirectBatchCtx& ctx, double* snr_out,
                       double* power_out);
void indirect_batch_avx2(const double* pmax, const double* inv_eta_pm, int n,
                         const IndirectBatchCtx& ctx, double* eff_out,
                         double* power_out);
#endif

// Runtime-dispatched variants (AVX2 when the CPU supports it).
DirectBatchFn direct_batch();
IndirectBatchFn indirect_batch();
const char* active_impl(); // "avx2" or "scalar"

} // namespace ncrsim::kernels
