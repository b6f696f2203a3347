#pragma once

namespace qng {

/// Hanbury Brown-Twiss outcome probabilities behind a balanced beam splitter.
///   p0  - no click on the first detector
///   p00 - no click on either detector
///   ps  - click on the first detector        (= 1 - p0)
///   pe  - clicks on both detectors           (= 1 - 2 p0 + p00)
struct ClickStats {
  double p0 = 1.0;
  double p00 = 1.0;
  double ps = 0.0;
  double pe = 0.0;
};

/// Vacuum, single-photon and multi-photon populations.
struct FockProbs {
  double p0 = 1.0;
  double p1 = 0.0;
  double p2plus = 0.0;
};

}  // namespace qng
