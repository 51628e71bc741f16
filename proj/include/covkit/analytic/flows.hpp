#pragma once

// The analytic constructions packaged as FlowMaps, ready for the CoV
// evaluators and the CLI demos.

#include "covkit/analytic/donut.hpp"
#include "covkit/analytic/gaussian_example.hpp"
#include "covkit/bijective/flow.hpp"

namespace covkit::analytic {

// Annulus flow: standard normal codes to the uniform donut.
inline bijective::FlowMap donut_nf_flow() {
  bijective::FlowMap flow(2);
  flow.push(bijective::custom_layer("donut_nf", donut_nf_decoder(), donut_nf_encoder(),
                                    [](const Vec& z) { return donut_nf_decoder_logdet(z); }));
  return flow;
}

// Bijective Gaussian pair g(z) = [z1, z2/2].
inline bijective::FlowMap gauss_bijective_flow() {
  bijective::FlowMap flow(2);
  flow.push(bijective::scale_layer(make_vec({1.0, 0.5})));
  return flow;
}

}  // namespace covkit::analytic
