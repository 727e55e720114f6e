#pragma once

namespace relreg {

//! Standard normal CDF.
double normal_cdf(double z);

//! Upper tail 1 - Phi(z), computed without cancellation.
double normal_sf(double z);

double normal_pdf(double z);

//! Inverse standard normal CDF on (0, 1); throws OutOfDomain otherwise.
double normal_quantile(double p);

} // namespace relreg
