#pragma once

// Every numerical threshold used by the library lives here.

namespace divroot::tol {

// algebra
inline constexpr double kAlgebraIdentity = 1e-12;      // norm multiplicativity, alternativity
inline constexpr double kOrthogonality = 1e-10;         // automorphism matrices
inline constexpr double kMultiplicativity = 1e-8;       // g(xy) = g(x)g(y)
inline constexpr double kLeibniz = 1e-10;               // derivation rule
inline constexpr double kExpmRelative = 1e-12;
inline constexpr double kExpmScaledNorm = 1.0;          // ||A / 2^s|| before Taylor
inline constexpr double kSubalgebraResidual = 1e-10;    // span closure test

// polynomial
inline constexpr double kNewtonResidual = 1e-14;
inline constexpr int kNewtonMaxIter = 50;
inline constexpr double kSphericalRootScale = 1e-8;     // ||A|| < s * (1 + max ||a_k||)
inline constexpr double kDivisionReconstruction = 1e-12;
inline constexpr double kFiniteDifferenceStep = 1e-5;

// manifolds
inline constexpr double kRankRelative = 1e-8;           // sigma_k > s * sigma_max
inline constexpr double kRankAmbiguityLow = 1e-11;      // ratios inside (low, high) are flagged
inline constexpr double kRankAmbiguityHigh = 1e-6;
inline constexpr double kIsolatedSeparation = 1e-4;
inline constexpr double kRootPolishResidual = 1e-13;    // complex solver, relative backward error
inline constexpr int kRootSolverMaxSweeps = 500;
inline constexpr double kRealRootImag = 1e-8;           // |Im z| below this (relative) is real
inline constexpr double kStratumMerge = 1e-6;
inline constexpr double kSymmetryMatch = 1e-8;
inline constexpr int kMultistartFromStrata = 64;
inline constexpr int kMultistartGaussian = 16;

// dynamics
inline constexpr double kCrossingResidual = 1e-10;      // |Delta(t_c)|
inline constexpr double kTangentialFraction = 1e-6;     // v_tol = s * max|dDelta/dt|
inline constexpr double kPeakThresholdDb = 10.0;

// flow
inline constexpr double kCaptureRadius = 0.05;
inline constexpr double kStartAngle = 1.0471975511965976;  // pi / 3
inline constexpr double kAttractorDedup = 1e-6;
inline constexpr double kLyapunovSlack = 1e-12;         // relative to V(x0)
inline constexpr double kEquatorBand = 0.05;            // |cos phi| <= band is excluded

// thermo
inline constexpr double kAcceptanceLow = 0.2;
inline constexpr double kAcceptanceHigh = 0.5;
inline constexpr double kAcceptanceFailLow = 0.05;
inline constexpr double kAcceptanceFailHigh = 0.8;
inline constexpr int kBatchCount = 20;
inline constexpr double kEntropyDrift = 0.25;

}  // namespace divroot::tol
