#pragma once

#include <array>

namespace fpn::reference {

// Published threshold scenarios: the (a6, a7) pairs and starting points used
// with the structural constants of dixit_pindyck::reference_structural_constants(),
// together with the reported results at epsilon = 1e-4. Values are transcribed
// as printed (thousands separators dropped).
struct ThresholdRow {
  int row;
  double a6;
  double a7;
  double h0;
  double l0;
  double residual_x0;  // ||f(x0)||_2
  double alpha;
  double H;
  double L;
  double step_norm;      // ||x_n - x_{n-1}||_2
  double residual_norm;  // ||f(x_n)||_2
  int iterations;
};

inline constexpr std::array<ThresholdRow, 5> threshold_rows{{
    {1, 451474, 396499, 15, 20, 6.00379e5, 0.26131, 41844.57090443, 11857.32126593, 6.94046e-6,
     6.96414e-5, 78},
    {2, 706975, 652000, 17, 18, 9.61232e5, 0.25628, 60324.4350877, 20727.99532223, 5.03627e-6,
     8.61788e-5, 85},
    {3, 598655, 582680, 9, 16, 8.35072e5, 0.23116, 43561.70316013, 20925.42239162, 7.21678e-6,
     8.66393e-5, 128},
    {4, 506975, 452000, 5, 19, 6.78951e5, 0.27136, 45951.77394332, 13741.03694719, 4.60353e-6,
     8.71723e-5, 105},
    {5, 633603, 578628, 11, 12, 8.57733e5, 0.24623, 55117.71562961, 18133.15925118, 6.19923e-6,
     9.26936e-5, 83},
}};

inline constexpr double reference_epsilon = 1e-4;

}  // namespace fpn::reference
