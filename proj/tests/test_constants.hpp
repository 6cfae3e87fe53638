#pragma once

// 49-digit decimals for the irrational test tori. The 2D one has an
// irrational aspect ratio a^4 = sqrt(2): coincidences m^2 - m'^2 =
// (n'^2 - n^2) a^4 then have no integer solutions, so every norm is a single
// symmetry orbit. Plain quadratic surds for a^2 do NOT have that property
// (a^2 = sqrt(2) gives a^4 = 2 and exact cross-orbit collisions).
inline constexpr const char* kFourthRoot2 = "1.189207115002721066717499970560475915292972092464";
inline constexpr const char* kSqrt2 = "1.414213562373095048801688724209698078569671875377";
inline constexpr const char* kSqrt3 = "1.732050807568877293527446341505872366942805253810";
