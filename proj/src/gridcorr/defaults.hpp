#pragma once

// Parameter defaults used throughout the library, the C API and the CLI.

namespace gridcorr::defaults {

inline constexpr double kSmoothingTheta = 3.0;     // exponential smoothing decay
inline constexpr int kEventSyncTau = 3;            // hours
inline constexpr int kSpectralClusters = 200;      // full-market spectral k
inline constexpr int kMovingStdWindow = 50;        // windows
inline constexpr int kWindowHours = 168;           // one week
inline constexpr int kStringGram = 3;              // p-spectrum kernel length
inline constexpr double kSparseRho = 0.1;
inline constexpr double kThresholdQuantile = 0.5;  // median thresholding
inline constexpr int kPmfgCap = 2000;
inline constexpr int kKmeansRestarts = 50;
inline constexpr int kMaxForwardFillHours = 3;
inline constexpr double kMarketSignFraction = 0.9;

}  // namespace gridcorr::defaults
