#include "emoarcs/text.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_support.hpp"

using namespace emoarcs;
namespace ts = testsupport;

namespace {

TEST(PreprocessTest, RuleApplication) {
  EXPECT_EQ(preprocess("Great DAY http://x.co 100"), "great day");
  EXPECT_EQ(preprocess(""), "");
  EXPECT_EQ(preprocess("   \t \n"), "");
  EXPECT_EQ(preprocess("Check WWW.example.com now"), "check now");
  EXPECT_EQ(preprocess("@User said #Happy things"), "user said happy things");
  EXPECT_EQ(preprocess("pi is 3.14 ok 1,000,000"), "pi is ok");
  EXPECT_EQ(preprocess("31st isn't a bare number"), "31st isn't a bare number");
  EXPECT_EQ(preprocess("#www.sneaky.url stays gone"), "stays gone");
}

TEST(PreprocessTest, OptionsDisableRules) {
  PreprocessOptions keep;
  keep.strip_urls = false;
  keep.strip_numbers = false;
  keep.strip_markers = false;
  EXPECT_EQ(preprocess("See http://x.co 100 @me", keep), "see http://x.co 100 @me");
}

// Corpus check: no output token may match the URL or number patterns.
TEST(PreprocessTest, OutputsNeverContainUrlOrNumberTokens) {
  std::mt19937 rng(123);
  const std::vector<std::string> pieces = {
      "hello",  "WORLD",    "http://a.b/c", "https://x.yz", "www.site.org", "42",
      "3.14",   "@someone", "#tag",         "1,000",        "great-day",    "so!",
      "i'm",    "100%",     "(wow)",        "-7",           "C3PO",         "...",
  };
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(0, 20);
  for (int trial = 0; trial < 500; ++trial) {
    std::string raw;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) {
      raw += pieces[pick(rng)];
      raw += ' ';
    }
    const std::string clean = preprocess(raw);
    std::istringstream ss(clean);
    std::string token;
    while (ss >> token) {
      EXPECT_FALSE(token.starts_with("http://") || token.starts_with("https://") ||
                   token.starts_with("www."))
          << "URL survived: " << token;
      const bool all_digit_punct =
          !token.empty() &&
          std::all_of(token.begin(), token.end(),
                      [](char c) {
                        return is_ascii_digit(c) || c == '.' || c == ',' || c == ':' ||
                               c == '%' || c == '/' || c == '+' || c == '-' || c == '$';
                      }) &&
          std::any_of(token.begin(), token.end(), [](char c) { return is_ascii_digit(c); });
      EXPECT_FALSE(all_digit_punct) << "number token survived: " << token;
    }
  }
}

TEST(TokenizeTest, RuleApplication) {
  EXPECT_EQ(tokenize("i'm so, so happy!"),
            (std::vector<std::string>{"i'm", "so", "so", "happy"}));
  EXPECT_EQ(tokenize("---"), std::vector<std::string>{});
  EXPECT_EQ(tokenize(""), std::vector<std::string>{});
  EXPECT_EQ(tokenize("  spaced   out  "), (std::vector<std::string>{"spaced", "out"}));
  EXPECT_EQ(tokenize("(parens) [brackets]"),
            (std::vector<std::string>{"parens", "brackets"}));
}

TEST(TokenizeTest, NonAsciiBytesAreWordCharacters) {
  // UTF-8 multibyte text must pass through unharmed.
  EXPECT_EQ(tokenize("caf\xc3\xa9 \xe2\x98\x83"),
            (std::vector<std::string>{"caf\xc3\xa9", "\xe2\x98\x83"}));
}

class ScoreInstanceTest : public ::testing::Test {
 protected:
  ScoreInstanceTest()
      : chain_(FallbackChain::single(
            Lexicon("mini", "valence", LexiconKind::Continuous, {-1.0, 1.0},
                    {{"happy", 0.9}, {"sad", -0.8}, {"calm", 0.2}}))) {}
  FallbackChain chain_;
};

TEST_F(ScoreInstanceTest, PolicyDefinition) {
  const std::vector<std::string> tokens{"happy", "stone"};
  const auto skip = score_instance(tokens, chain_, OOVPolicy::Skip);
  EXPECT_EQ(skip.token_count, 2u);
  EXPECT_EQ(skip.in_vocab_count, 1u);
  ASSERT_TRUE(skip.score.has_value());
  EXPECT_DOUBLE_EQ(*skip.score, 0.9);

  const auto zero = score_instance(tokens, chain_, OOVPolicy::Zero);
  ASSERT_TRUE(zero.score.has_value());
  EXPECT_DOUBLE_EQ(*zero.score, 0.45);
}

TEST_F(ScoreInstanceTest, NoScoreableTokens) {
  const std::vector<std::string> oov{"stone", "rock"};
  const auto skip = score_instance(oov, chain_, OOVPolicy::Skip);
  EXPECT_FALSE(skip.score.has_value());
  EXPECT_EQ(skip.in_vocab_count, 0u);

  const auto zero = score_instance(oov, chain_, OOVPolicy::Zero);
  ASSERT_TRUE(zero.score.has_value());  // token_count > 0 forces a score
  EXPECT_DOUBLE_EQ(*zero.score, 0.0);

  const std::vector<std::string> empty;
  EXPECT_FALSE(score_instance(empty, chain_, OOVPolicy::Skip).score.has_value());
  EXPECT_FALSE(score_instance(empty, chain_, OOVPolicy::Zero).score.has_value());
}

TEST_F(ScoreInstanceTest, SkipInvariantToAppendedOOVZeroStrictlyLower) {
  const std::vector<std::string> base{"happy", "calm"};
  const auto skip_before = score_instance(base, chain_, OOVPolicy::Skip);
  const auto zero_before = score_instance(base, chain_, OOVPolicy::Zero);

  std::vector<std::string> extended = base;
  extended.insert(extended.end(), {"stone", "rock", "pebble"});
  const auto skip_after = score_instance(extended, chain_, OOVPolicy::Skip);
  const auto zero_after = score_instance(extended, chain_, OOVPolicy::Zero);

  EXPECT_DOUBLE_EQ(*skip_before.score, *skip_after.score);
  EXPECT_LT(*zero_after.score, *zero_before.score);
}

TEST_F(ScoreInstanceTest, PoliciesAgreeWhenFullyInVocab) {
  const std::vector<std::string> tokens{"happy", "sad", "calm"};
  const auto skip = score_instance(tokens, chain_, OOVPolicy::Skip);
  const auto zero = score_instance(tokens, chain_, OOVPolicy::Zero);
  EXPECT_DOUBLE_EQ(*skip.score, *zero.score);
}

TEST_F(ScoreInstanceTest, PermutationInvariant) {
  std::vector<std::string> tokens{"happy", "stone", "sad", "calm", "rock"};
  const auto before = score_instance(tokens, chain_, OOVPolicy::Zero);
  std::mt19937 rng(4);
  std::shuffle(tokens.begin(), tokens.end(), rng);
  const auto after = score_instance(tokens, chain_, OOVPolicy::Zero);
  EXPECT_DOUBLE_EQ(*before.score, *after.score);
  EXPECT_EQ(before.in_vocab_count, after.in_vocab_count);
}

// Categorical {0,1} lexicon: both policies yield the fraction of
// emotion-associated words over the policy's denominator.
TEST(ScoreInstancePercentageTest, CategoricalFractionSemantics) {
  const FallbackChain chain = FallbackChain::single(
      Lexicon("emo", "anger", LexiconKind::Categorical, {0.0, 1.0},
              {{"furious", 1.0}, {"mad", 1.0}, {"table", 0.0}}, {0.0, 1.0}));
  const std::vector<std::string> tokens{"furious", "mad", "table", "cloud"};
  // Skip: 3 in-vocab tokens, 2 angry -> 2/3. Zero: 2/4.
  EXPECT_DOUBLE_EQ(*score_instance(tokens, chain, OOVPolicy::Skip).score, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*score_instance(tokens, chain, OOVPolicy::Zero).score, 0.5);
}

// Random instances against the naive per-token oracle.
TEST(ScoreInstanceOracleTest, MatchesBruteForceScorer) {
  const auto primary = ts::synthetic_lexicon("a", 200, -1.0, 1.0, 31);
  const auto secondary = ts::synthetic_lexicon("b", 200, -1.0, 1.0, 32);
  const FallbackChain chain(
      {std::make_shared<const Lexicon>(primary), std::make_shared<const Lexicon>(secondary)});

  std::mt19937 rng(33);
  std::uniform_int_distribution<int> n_tokens(0, 25);
  std::uniform_int_distribution<int> pick(0, 399);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::string> tokens;
    const int n = n_tokens(rng);
    for (int i = 0; i < n; ++i) {
      const int t = pick(rng);
      // mix of a-terms, b-terms, and OOV terms
      if (t < 200)
        tokens.push_back("a" + std::to_string(t));
      else if (t < 300)
        tokens.push_back("b" + std::to_string(t - 200));
      else
        tokens.push_back("oov" + std::to_string(t));
    }
    for (const auto policy : {OOVPolicy::Skip, OOVPolicy::Zero}) {
      const auto got = score_instance(tokens, chain, policy);
      const auto expected = ts::naive_score(tokens, chain, policy);
      ASSERT_EQ(got.score.has_value(), expected.has_value());
      if (expected) EXPECT_NEAR(*got.score, *expected, 1e-12);
    }
  }
}

}  // namespace
