#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ftdetect::testing {

std::vector<double> count_features(const std::vector<std::string>& tokens,
                                   const std::vector<std::string>& vocab_tokens,
                                   const std::vector<Bigram>& vocab_bigrams) {
  const std::size_t nv = vocab_tokens.size(), nb = vocab_bigrams.size();
  std::vector<double> out(nv + nb + 2, 0.0);
  if (tokens.empty()) return out;
  const auto known = [&](const std::string& t) {
    return std::find(vocab_tokens.begin(), vocab_tokens.end(), t) != vocab_tokens.end();
  };
  std::vector<std::string> sub;
  for (const auto& t : tokens) sub.push_back(known(t) ? t : "<UNK>");

  const double n = static_cast<double>(tokens.size());
  std::map<std::string, int> tc;
  for (const auto& t : sub) ++tc[t];
  for (std::size_t i = 0; i < nv; ++i) out[i] = tc[vocab_tokens[i]] / n;
  out[nv] = tc["<UNK>"] / n;

  if (tokens.size() >= 2) {
    const double m = n - 1;
    std::map<Bigram, int> bc;
    for (std::size_t i = 0; i + 1 < sub.size(); ++i) ++bc[{sub[i], sub[i + 1]}];
    int in_vocab = 0;
    for (std::size_t j = 0; j < nb; ++j) {
      out[nv + 1 + j] = bc[vocab_bigrams[j]] / m;
      in_vocab += bc[vocab_bigrams[j]];
    }
    out[nv + nb + 1] = (m - in_vocab) / m;
  }
  return out;
}

namespace {

double batch_loss(const ModelParameters& params, const std::vector<FeatureVector>& batch) {
  double sum = 0.0;
  for (const auto& s : batch) {
    const auto pass = forward(params, s.values, Mode::kInfer);
    sum += cross_entropy(pass.probabilities, *s.label);
  }
  return sum / static_cast<double>(batch.size());
}

}  // namespace

GradientCheck check_gradients(const ModelParameters& params,
                              const std::vector<FeatureVector>& batch, double h) {
  const Gradients g = gradients(params, batch, Mode::kInfer);
  ModelParameters probe = params;
  GradientCheck result;
  const auto compare = [&](double& slot, double analytic) {
    const double saved = slot;
    slot = saved + h;
    const double up = batch_loss(probe, batch);
    slot = saved - h;
    const double down = batch_loss(probe, batch);
    slot = saved;
    const double numeric = (up - down) / (2 * h);
    const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
    result.worst_relative_error =
        std::max(result.worst_relative_error, std::abs(analytic - numeric) / scale);
    ++result.partials;
  };
  for (std::size_t k = 0; k < probe.layers.size(); ++k) {
    for (std::size_t i = 0; i < probe.layers[k].weights.size(); ++i) {
      compare(probe.layers[k].weights[i], g.weights[k][i]);
    }
    for (std::size_t i = 0; i < probe.layers[k].bias.size(); ++i) {
      compare(probe.layers[k].bias[i], g.bias[k][i]);
    }
  }
  return result;
}

}  // namespace ftdetect::testing
