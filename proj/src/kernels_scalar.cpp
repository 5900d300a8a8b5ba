#include "ncrsim/kernels.hpp"

#include <algorithm>

namespace ncrsim::kernels {

void direct_batch_scalar(const double* paout, const double* inv_eta, int n,
                         const DirectBatchCtx& ctx, double* snr_out,
                         double* power_out) {
  for (int i = 0; i < n; ++i) {
    const double p = paout[i];
    snr_out[i] = (p * ctx.ntx2) * ctx.nrx / ctx.den;
    const double pa_raw = ((ctx.ntx_d * p) / ctx.ref_tx) * inv_eta[i] * ctx.diff;
    power_out[i] = ctx.base + ctx.beta * pa_raw;
  }
}

void indirect_batch_scalar(const double* pmax, const double* inv_eta_pm, int n,
                           const IndirectBatchCtx& ctx, double* eff_out,
                           double* power_out) {
  for (int i = 0; i < n; ++i) {
    const double pm = pmax[i];
    const double pa = std::min(pm, ctx.lim);
    const double inv_e = (pm <= ctx.lim) ? inv_eta_pm[i] : ctx.inv_eta_lim;
    const double ac = (pa * ctx.ntx2_ncr) * ctx.nrx_ue / ctx.den_ac;
    const double u = (1.0 + ac) / ctx.snr_bh;
    eff_out[i] = ac / (1.0 + u);
    const double tx = ((ctx.ntxd_ncr * pa) / ctx.ncr_ref) * inv_e * ctx.xi_pad;
    power_out[i] = ctx.gnb_total + (ctx.ncr_base + tx);
  }
}

} // namespace ncrsim::kernels
