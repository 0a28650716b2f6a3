// Copyright 2026 the scenvar authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "scenvar/errors.hpp"
#include "scenvar/geometry.hpp"

namespace scenvar {

/// Second-order section with normalized a0.
struct Biquad {
  double b0{1.0}, b1{0.0}, b2{0.0};
  double a1{0.0}, a2{0.0};
};

/// Butterworth band-pass from a 2nd-order analog prototype (4 poles total),
/// discretized with the bilinear transform and prewarped band edges. The two
/// conjugate pole pairs become two cascaded biquads; the band-pass zeros land
/// on z = +1 and z = -1. Gain is set to unity at the geometric center.
inline std::array<Biquad, 2> design_butter_bandpass(double f_lo, double f_hi, double fs) {
  if (!(f_lo > 0.0) || !(f_hi > f_lo)) {
    throw InvalidArgumentError("bandpass: need 0 < f_lo < f_hi");
  }
  if (!(fs > 2.0 * f_hi)) {
    throw InvalidArgumentError("bandpass: sampling rate " + std::to_string(fs) +
                               " Hz too low, need fs > " + std::to_string(2.0 * f_hi) + " Hz");
  }
  using cplx = std::complex<double>;
  const double fs2 = 2.0 * fs;
  const double w1 = fs2 * std::tan(kPi * f_lo / fs);
  const double w2 = fs2 * std::tan(kPi * f_hi / fs);
  const double w0_sq = w1 * w2;
  const double bw = w2 - w1;

  // One prototype pole of the conjugate pair; its twin mirrors below the axis.
  const cplx proto = std::polar(1.0, 3.0 * kPi / 4.0);
  const cplx pb = proto * bw;
  const cplx root = std::sqrt(pb * pb - 4.0 * w0_sq);
  const cplx s_a = 0.5 * (pb + root);
  const cplx s_b = 0.5 * (pb - root);

  const auto bilinear = [&](cplx s) { return (fs2 + s) / (fs2 - s); };
  const cplx z_a = bilinear(s_a);
  const cplx z_b = bilinear(s_b);

  std::array<Biquad, 2> sos;
  const auto section = [](cplx pole) {
    Biquad q;
    q.b0 = 1.0;
    q.b1 = 0.0;
    q.b2 = -1.0;  // zeros at z = +1 and z = -1
    q.a1 = -2.0 * pole.real();
    q.a2 = std::norm(pole);
    return q;
  };
  sos[0] = section(z_a);
  sos[1] = section(z_b);

  const double wc = 2.0 * std::atan(std::sqrt(w0_sq) / fs2);  // digital center
  const cplx z = std::polar(1.0, wc);
  cplx h{1.0, 0.0};
  for (const auto& q : sos) {
    h *= (z * z * q.b0 + z * q.b1 + q.b2) / (z * z + z * q.a1 + q.a2);
  }
  const double gain = 1.0 / std::abs(h);
  sos[0].b0 *= gain;
  sos[0].b1 *= gain;
  sos[0].b2 *= gain;
  return sos;
}

namespace detail {

/// Single pass through one section (transposed direct form II). The state is
/// initialized to the step steady state scaled by the first sample, which
/// suppresses the start-up transient the same way scipy's filtfilt does.
inline std::vector<double> biquad_filter(const Biquad& q, const std::vector<double>& x) {
  std::vector<double> y(x.size());
  const double dc_gain = (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);
  double z1 = (dc_gain - q.b0) * (x.empty() ? 0.0 : x.front());
  double z2 = (q.b2 - q.a2 * dc_gain) * (x.empty() ? 0.0 : x.front());
  for (size_t i = 0; i < x.size(); ++i) {
    const double out = q.b0 * x[i] + z1;
    z1 = q.b1 * x[i] - q.a1 * out + z2;
    z2 = q.b2 * x[i] - q.a2 * out;
    y[i] = out;
  }
  return y;
}

inline std::vector<double> sos_filter(const std::array<Biquad, 2>& sos,
                                      const std::vector<double>& x) {
  std::vector<double> y = biquad_filter(sos[0], x);
  return biquad_filter(sos[1], y);
}

}  // namespace detail

/// Zero-phase filtering: odd-extension padding, forward pass, time reversal,
/// second pass, reversal again. Output length equals input length.
inline std::vector<double> sosfiltfilt(const std::array<Biquad, 2>& sos,
                                       const std::vector<double>& x) {
  if (x.empty()) {
    return {};
  }
  const size_t padlen = std::min(x.size() - 1, static_cast<size_t>(15));
  std::vector<double> ext;
  ext.reserve(x.size() + 2 * padlen);
  for (size_t i = 0; i < padlen; ++i) {
    ext.push_back(2.0 * x.front() - x[padlen - i]);
  }
  ext.insert(ext.end(), x.begin(), x.end());
  for (size_t i = 0; i < padlen; ++i) {
    ext.push_back(2.0 * x.back() - x[x.size() - 2 - i]);
  }
  std::vector<double> y = detail::sos_filter(sos, ext);
  std::reverse(y.begin(), y.end());
  y = detail::sos_filter(sos, y);
  std::reverse(y.begin(), y.end());
  return {y.begin() + static_cast<ptrdiff_t>(padlen),
          y.begin() + static_cast<ptrdiff_t>(padlen + x.size())};
}

/// Band-passed copy of the signal (1-32 Hz comfort band by default).
inline std::vector<double> bandpass(const std::vector<double>& signal, double fs,
                                    double f_lo = 1.0, double f_hi = 32.0) {
  return sosfiltfilt(design_butter_bandpass(f_lo, f_hi, fs), signal);
}

/// Trapezoidal RMS over [t0, tf] (bounds taken ascending):
///   sqrt( integral(a^2 dt) / window ).
/// Sample i sits at t = i * dt; the window is clipped to the sample grid.
inline double rms(const std::vector<double>& signal, double dt, double t0, double tf) {
  if (t0 > tf) {
    std::swap(t0, tf);
  }
  if (signal.size() < 2 || !(dt > 0.0)) {
    throw InvalidArgumentError("rms: need at least two samples and dt > 0");
  }
  const auto i0 = static_cast<size_t>(std::max(0.0, std::ceil(t0 / dt - 1e-9)));
  const auto i1_raw = static_cast<size_t>(std::floor(tf / dt + 1e-9));
  const size_t i1 = std::min(i1_raw, signal.size() - 1);
  if (i1 <= i0) {
    throw InvalidArgumentError("rms: window contains fewer than two samples");
  }
  double integral = 0.0;
  for (size_t i = i0; i < i1; ++i) {
    integral += 0.5 * (signal[i] * signal[i] + signal[i + 1] * signal[i + 1]) * dt;
  }
  return std::sqrt(integral / (static_cast<double>(i1 - i0) * dt));
}

inline double rms(const std::vector<double>& signal, double dt) {
  return rms(signal, dt, 0.0, static_cast<double>(signal.size() - 1) * dt);
}

/// Central finite differences, one-sided at the ends.
inline std::vector<double> central_difference(const std::vector<double>& x, double dt) {
  if (x.size() < 3) {
    throw InsufficientDataError("central_difference: need at least 3 samples");
  }
  const size_t n = x.size();
  std::vector<double> d(n);
  d[0] = (x[1] - x[0]) / dt;
  d[n - 1] = (x[n - 1] - x[n - 2]) / dt;
  for (size_t i = 1; i + 1 < n; ++i) {
    d[i] = (x[i + 1] - x[i - 1]) / (2.0 * dt);
  }
  return d;
}

/// 3-point moving average; the end samples pass through unchanged.
inline std::vector<double> moving_average3(const std::vector<double>& x) {
  if (x.size() < 3) {
    return x;
  }
  std::vector<double> y = x;
  for (size_t i = 1; i + 1 < x.size(); ++i) {
    y[i] = (x[i - 1] + x[i] + x[i + 1]) / 3.0;
  }
  return y;
}

}  // namespace scenvar
