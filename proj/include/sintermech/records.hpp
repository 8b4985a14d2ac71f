#pragma once

#include "sintermech/tensorlab.hpp"

namespace sintermech {

/// One output row of a driver.  p and q are invariants of the applied
/// stress; the axial direction is the 1-axis.
struct TimeSeriesRecord {
  double time_s = 0.0;
  double T_C = 0.0;
  double p_MPa = 0.0;
  double q_MPa = 0.0;
  double eps_axial = 0.0;
  /// eps_axial minus the free linear thermal strain (α0/3)(T − T0).
  double eps_axial_corrected = 0.0;
  double eps_p_trace = 0.0;
  double rho_hat = 0.0;
  double R_grain_m = 0.0;
  double yield_value_MPa = 0.0;
  double dissipation_MPa = 0.0;
  double dlambda = 0.0;
  int substeps = 0;

  tensorlab::SymTensor3 sigma;  ///< applied stress [MPa]
  tensorlab::SymTensor3 eps;    ///< total log strain
  tensorlab::SymTensor3 eps_p;  ///< plastic log strain
};

}  // namespace sintermech
