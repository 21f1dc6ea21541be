#include <cmath>
#include <vector>

#include "mscs/error.hpp"
#include "mscs/ops.hpp"

namespace mscs {
namespace detail {

const std::vector<double>& wavelet_lowpass(WaveletFamily family) {
  static const std::vector<double> haar{M_SQRT1_2, M_SQRT1_2};
  // Daubechies, 4 vanishing moments.
  static const std::vector<double> db4{
      2.30377813308896506328e-01,  7.14846570552915672181e-01,  6.30880767929858921050e-01,
      -2.79837694168598542788e-02, -1.87034811719093085891e-01, 3.08413818355607639854e-02,
      3.28830116668851965556e-02,  -1.05974017850690317016e-02};
  // Daubechies, 10 vanishing moments.
  static const std::vector<double> db10{
      2.66700579005555542256e-02,  1.88176800077691497304e-01,  5.27201188931725628350e-01,
      6.88459039453603538483e-01,  2.81172343660577472857e-01,  -2.49846424327315380642e-01,
      -1.95946274377377049891e-01, 1.27369340335793251873e-01,  9.30573646035723484049e-02,
      -7.13941471663970816941e-02, -2.94575368218758133765e-02, 3.32126740593410019198e-02,
      3.60655356695616970131e-03,  -1.07331754833305745289e-02, 1.39535174705290106363e-03,
      1.99240529518505612994e-03,  -6.85856694959711618576e-04, -1.16466855129285448982e-04,
      9.35886703200695919220e-05,  -1.32642028945212442831e-05};
  switch (family) {
    case WaveletFamily::Haar: return haar;
    case WaveletFamily::Db4: return db4;
    case WaveletFamily::Db10: return db10;
  }
  return haar;
}

namespace {

// One analysis stage on in[0..m): approximation to out[0..m/2), detail to out[m/2..m).
void analysis_stage(const std::vector<double>& h, const double* in, double* out, Index m) {
  const Index half = m / 2;
  const Index taps = static_cast<Index>(h.size());
  for (Index i = 0; i < half; ++i) {
    double approx = 0.0;
    double detail = 0.0;
    for (Index k = 0; k < taps; ++k) {
      const double sample = in[(2 * i + k) % m];
      approx += h[k] * sample;
      const double g = ((k & 1) ? -1.0 : 1.0) * h[taps - 1 - k];
      detail += g * sample;
    }
    out[i] = approx;
    out[half + i] = detail;
  }
}

// Transpose of analysis_stage.
void synthesis_stage(const std::vector<double>& h, const double* in, double* out, Index m) {
  const Index half = m / 2;
  const Index taps = static_cast<Index>(h.size());
  for (Index j = 0; j < m; ++j) out[j] = 0.0;
  for (Index i = 0; i < half; ++i) {
    const double approx = in[i];
    const double detail = in[half + i];
    for (Index k = 0; k < taps; ++k) {
      const double g = ((k & 1) ? -1.0 : 1.0) * h[taps - 1 - k];
      out[(2 * i + k) % m] += h[k] * approx + g * detail;
    }
  }
}

}  // namespace

void wavelet_forward(const std::vector<double>& lowpass, int levels, const double* in, double* out,
                     Index n) {
  std::vector<double> work(in, in + n);
  std::vector<double> stage(static_cast<std::size_t>(n));
  Index m = n;
  for (int level = 0; level < levels; ++level) {
    analysis_stage(lowpass, work.data(), stage.data(), m);
    std::copy(stage.begin(), stage.begin() + m, work.begin());
    m /= 2;
  }
  std::copy(work.begin(), work.end(), out);
}

void wavelet_inverse(const std::vector<double>& lowpass, int levels, const double* in, double* out,
                     Index n) {
  std::vector<double> work(in, in + n);
  std::vector<double> stage(static_cast<std::size_t>(n));
  Index m = n >> levels;
  for (int level = 0; level < levels; ++level) {
    m *= 2;
    synthesis_stage(lowpass, work.data(), stage.data(), m);
    std::copy(stage.begin(), stage.begin() + m, work.begin());
  }
  std::copy(work.begin(), work.end(), out);
}

}  // namespace detail

std::string to_string(WaveletFamily family) {
  switch (family) {
    case WaveletFamily::Haar: return "haar";
    case WaveletFamily::Db4: return "db4";
    case WaveletFamily::Db10: return "db10";
  }
  return "unknown";
}

WaveletFamily wavelet_family_from_string(const std::string& name) {
  if (name == "haar" || name == "db1") return WaveletFamily::Haar;
  if (name == "db4") return WaveletFamily::Db4;
  if (name == "db10") return WaveletFamily::Db10;
  throw ParameterError("unknown wavelet family: " + name);
}

}  // namespace mscs
