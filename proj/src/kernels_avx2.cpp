// AVX2 variants of the batch kernels. Compiled with -mavx2 only (no FMA),
// so every lane performs the same IEEE mul/div/min sequence as the scalar
// reference and results match it bitwise.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "ncrsim/kernels.hpp"

namespace ncrsim::kernels {

void direct_batch_avx2(const double* paout, const double* inv_eta, int n,
                       const DirectBatchCtx& ctx, double* snr_out,
                       double* power_out) {
  const __m256d ntx2 = _mm256_set1_pd(ctx.ntx2);
  const __m256d nrx = _mm256_set1_pd(ctx.nrx);
  const __m256d den = _mm256_set1_pd(ctx.den);
  const __m256d ntx_d = _mm256_set1_pd(ctx.ntx_d);
  const __m256d ref_tx = _mm256_set1_pd(ctx.ref_tx);
  const __m256d diff = _mm256_set1_pd(ctx.diff);
  const __m256d beta = _mm256_set1_pd(ctx.beta);
  const __m256d base = _mm256_set1_pd(ctx.base);

  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_loadu_pd(paout + i);
    const __m256d ie = _mm256_loadu_pd(inv_eta + i);
    const __m256d snr =
        _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(p, ntx2), nrx), den);
    __m256d pa_raw = _mm256_div_pd(_mm256_mul_pd(ntx_d, p), ref_tx);
    pa_raw = _mm256_mul_pd(_mm256_mul_pd(pa_raw, ie), diff);
    const __m256d power = _mm256_add_pd(base, _mm256_mul_pd(beta, pa_raw));
    _mm256_storeu_pd(snr_out + i, snr);
    _mm256_storeu_pd(power_out + i, power);
  }
  if (i < n)
    direct_batch_scalar(paout + i, inv_eta + i, n - i, ctx, snr_out + i,
                        power_out + i);
}

void indirect_batch_avx2(const double* pmax, const double* inv_eta_pm, int n,
                         const IndirectBatchCtx& ctx, double* eff_out,
                         double* power_out) {
  const __m256d lim = _mm256_set1_pd(ctx.lim);
  const __m256d inv_eta_lim = _mm256_set1_pd(ctx.inv_eta_lim);
  const __m256d snr_bh = _mm256_set1_pd(ctx.snr_bh);
  const __m256d ntx2_ncr = _mm256_set1_pd(ctx.ntx2_ncr);
  const __m256d nrx_ue = _mm256_set1_pd(ctx.nrx_ue);
  const __m256d den_ac = _mm256_set1_pd(ctx.den_ac);
  const __m256d ntxd_ncr = _mm256_set1_pd(ctx.ntxd_ncr);
  const __m256d ncr_ref = _mm256_set1_pd(ctx.ncr_ref);
  const __m256d xi_pad = _mm256_set1_pd(ctx.xi_pad);
  const __m256d ncr_base = _mm256_set1_pd(ctx.ncr_base);
  const __m256d gnb_total = _mm256_set1_pd(ctx.gnb_total);
  const __m256d one = _mm256_set1_pd(1.0);

  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d pm = _mm256_loadu_pd(pmax + i);
    const __m256d ie_pm = _mm256_loadu_pd(inv_eta_pm + i);
    const __m256d pa = _mm256_min_pd(pm, lim);
    const __m256d take_pm = _mm256_cmp_pd(pm, lim, _CMP_LE_OQ);
    const __m256d inv_e = _mm256_blendv_pd(inv_eta_lim, ie_pm, take_pm);
    const __m256d ac =
        _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(pa, ntx2_ncr), nrx_ue), den_ac);
    const __m256d u = _mm256_div_pd(_mm256_add_pd(one, ac), snr_bh);
    const __m256d eff = _mm256_div_pd(ac, _mm256_add_pd(one, u));
    __m256d tx = _mm256_div_pd(_mm256_mul_pd(ntxd_ncr, pa), ncr_ref);
    tx = _mm256_mul_pd(_mm256_mul_pd(tx, inv_e), xi_pad);
    const __m256d power = _mm256_add_pd(gnb_total, _mm256_add_pd(ncr_base, tx));
    _mm256_storeu_pd(eff_out + i, eff);
    _mm256_storeu_pd(power_out + i, power);
  }
  if (i < n)
    indirect_batch_scalar(pmax + i, inv_eta_pm + i, n - i, ctx, eff_out + i,
                          power_out + i);
}

} // namespace ncrsim::kernels

#endif
