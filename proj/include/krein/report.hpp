#pragma once

#include "json.hpp"
#include "krein/characterization.hpp"
#include "krein/perturbation.hpp"
#include "krein/spectral.hpp"

namespace krein {

using nlohmann::json;

/// Complex numbers serialise as [re, im]; matrices as {"re": rows, "im": rows}.
json complex_json(Complex z);
json matrix_json(const Matrix& m);
json real_vector_json(const RealVector& v);

json spectrum_json(const SpectralDecomposition& d);

void to_json(json& j, const ConditionResult& c);
void to_json(json& j, const PointClassification& p);
void to_json(json& j, const SignClassification& s);
void to_json(json& j, const GrowthReport& g);
void to_json(json& j, const NonnegVerdict& v);
void to_json(json& j, const SimilarityResult& s);
void to_json(json& j, const LocalDecomposition& l);
void to_json(json& j, const NeighborhoodCheck& c);
void to_json(json& j, const LocalNonnegReport& r);
void to_json(json& j, const GammaBound& g);
void to_json(json& j, const TauResult& t);
void to_json(json& j, const BlockPerturbation& b);
void to_json(json& j, const RelativeBoundFit& f);
void to_json(json& j, const EnclosureCertificate& c);
void to_json(json& j, const SelfAdjointCheck& c);

}  // namespace krein
