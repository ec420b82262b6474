#pragma once

#include <cstdint>

#include "ftdetect/manifest.hpp"
#include "ftdetect/model_io.hpp"
#include "ftdetect/rng.hpp"
#include "ftdetect/vocabulary.hpp"

namespace ftdetect::testing {

// Random but valid artifacts for round-trip checks. Token strings include
// tabs, backslashes, newlines and the non-ASCII placeholder to exercise
// escaping.
Vocabulary random_vocabulary(Rng& rng);
ModelArtifact random_model(Rng& rng);
CorpusManifest random_manifest(Rng& rng);

}  // namespace ftdetect::testing
