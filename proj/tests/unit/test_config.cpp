#include <gtest/gtest.h>

#include "ftdetect/config.hpp"
#include "ftdetect/error.hpp"

using namespace ftdetect;

TEST(KeyValueConfig, ParsesCommentsAndWhitespace) {
  const auto c = KeyValueConfig::parse(
      "# corpus\n"
      "  seed = 42  \n"
      "\n"
      "min_ext_freq=0.001\r\n"
      "hidden = 64, 32 ,32\n"
      "trim_training_features = off\n");
  EXPECT_EQ(c.get_count("seed", 0), 42u);
  EXPECT_EQ(c.get_real("min_ext_freq", 0), 0.001);
  EXPECT_EQ(c.get_counts("hidden", {}), (std::vector<std::size_t>{64, 32, 32}));
  EXPECT_FALSE(c.get_bool("trim_training_features", true));
  EXPECT_EQ(c.get_real("learning_rate", 0.5), 0.5);
}

TEST(KeyValueConfig, Errors) {
  EXPECT_THROW(KeyValueConfig::parse("colour = red\n"), UsageError);
  EXPECT_THROW(KeyValueConfig::parse("seed = 1\nseed = 2\n"), UsageError);
  EXPECT_THROW(KeyValueConfig::parse("seed\n"), UsageError);
  EXPECT_THROW(KeyValueConfig::parse("seed = x\n").get_count("seed", 0), UsageError);
  EXPECT_THROW(KeyValueConfig::parse("epochs = -1\n").get_count("epochs", 0), UsageError);
  EXPECT_THROW(KeyValueConfig::parse("trim_training_features = maybe\n")
                   .get_bool("trim_training_features", true),
               UsageError);
  EXPECT_THROW(KeyValueConfig::load("/nonexistent/ftdetect.conf"), UsageError);
}

TEST(CorpusConfig, DefaultsAndOverrides) {
  EXPECT_EQ(corpus_config_from(KeyValueConfig{}), CorpusConfig{});
  const auto c = corpus_config_from(KeyValueConfig::parse(
      "train_fraction = 0.7\nvalidation_fraction = 0.2\ntest_fraction = 0.1\nseed = 9\n"));
  EXPECT_EQ(c.fractions.train, 0.7);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.min_ext_freq, 1e-4);
  EXPECT_EQ(c.max_nonprintable_ratio, 0.2);
  EXPECT_THROW(corpus_config_from(KeyValueConfig::parse("max_nonprintable_ratio = 2\n")),
               UsageError);
}

TEST(TrainingOptions, DefaultsFollowTheModel) {
  const auto o = training_options_from(KeyValueConfig{});
  EXPECT_EQ(o.train.learning_rate, 1e-4);
  EXPECT_EQ(o.train.epochs, 8u);
  EXPECT_EQ(o.train.batch_size, 128u);
  EXPECT_EQ(o.train.adam_beta1, 0.9);
  EXPECT_EQ(o.train.adam_beta2, 0.999);
  EXPECT_EQ(o.train.adam_epsilon, 1e-8);
  EXPECT_EQ(o.hidden, (std::vector<std::size_t>{1000, 800, 700}));
  EXPECT_EQ(o.dropout_rate, 0.5);
  EXPECT_EQ(o.activation, Activation::kRelu);
  EXPECT_EQ(o.vocabulary.token_threshold, 1e-2);
  EXPECT_EQ(o.vocabulary.bigram_threshold, 1e-3);
  EXPECT_EQ(o.vocabulary.trim, (TrimSettings{10, 10}));
  EXPECT_TRUE(o.trim_training_features);

  const auto arch = o.architecture(5063, 133);
  EXPECT_EQ(arch.input_dim, 5063u);
  EXPECT_EQ(arch.output_dim, 133u);
  EXPECT_EQ(arch.hidden, o.hidden);
}

TEST(TrainingOptions, FormatRoundTrips) {
  auto o = training_options_from(KeyValueConfig::parse(
      "hidden = 7,5\nactivation = tanh\nlearning_rate = 0.003\nseed = 12\n"
      "trim_head = 0\nbigram_threshold = 0.0025\n"));
  EXPECT_EQ(o.activation, Activation::kTanh);
  EXPECT_EQ(training_options_from(KeyValueConfig::parse(format_training_options(o))), o);
  EXPECT_THROW(training_options_from(KeyValueConfig::parse("activation = sigmoid\n")),
               UsageError);
  EXPECT_THROW(training_options_from(KeyValueConfig::parse("epochs = 0\n")), UsageError);

  CorpusConfig c;
  c.seed = 77;
  c.vocab_fraction = 0.35;
  EXPECT_EQ(corpus_config_from(KeyValueConfig::parse(format_corpus_config(c))), c);
}
