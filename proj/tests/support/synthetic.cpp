#include "synthetic.hpp"

#include <array>
#include <string_view>

namespace bqbench::testing {

namespace {

constexpr std::array<std::string_view, 40> kNouns{
    "man",    "woman",  "dog",    "cat",    "car",   "bus",    "train",  "table",  "chair", "bird",
    "horse",  "child",  "tree",   "house",  "boat",  "plane",  "shirt",  "hat",    "ball",  "kite",
    "pizza",  "cake",   "phone",  "laptop", "clock", "sign",   "street", "window", "door",  "bed",
    "person", "girl",   "boy",    "sheep",  "cow",   "bench",  "bottle", "cup",    "bowl",  "umbrella"};
constexpr std::array<std::string_view, 16> kAdjectives{
    "red",   "blue",  "green", "white", "black",  "large", "small", "old",
    "young", "happy", "wooden", "open", "yellow", "wet",   "empty", "striped"};
constexpr std::array<std::string_view, 12> kVerbs{
    "holding", "eating", "riding", "wearing", "looking at", "sitting on",
    "walking", "playing with", "carrying", "standing near", "driving", "watching"};
constexpr std::array<std::string_view, 8> kPlaces{
    "in the picture", "on the table", "in the room", "on the street",
    "in the water",  "in the sky",   "near the door", "on the grass"};

template <std::size_t N>
std::string_view pick(std::mt19937_64& rng, const std::array<std::string_view, N>& words) {
  return words[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

}  // namespace

QuestionGenerator::QuestionGenerator(std::uint64_t seed) : rng_(seed) {}

std::string QuestionGenerator::next_text() {
  const std::string noun(pick(rng_, kNouns));
  const std::string other(pick(rng_, kNouns));
  const std::string adj(pick(rng_, kAdjectives));
  const std::string verb(pick(rng_, kVerbs));
  const std::string place(pick(rng_, kPlaces));
  switch (std::uniform_int_distribution<int>(0, 9)(rng_)) {
    case 0: return "What color is the " + noun + "?";
    case 1: return "Is the " + noun + " " + adj + "?";
    case 2: return "How many " + noun + "s are " + place + "?";
    case 3: return "What is the " + noun + " " + verb + "?";
    case 4: return "Is the " + noun + " " + verb + " the " + other + "?";
    case 5: return "Where is the " + adj + " " + noun + "?";
    case 6: return "Is there a " + noun + " " + place + "?";
    case 7: return "What is " + place + " next to the " + noun + "?";
    case 8: return "Does the " + noun + " have a " + adj + " " + other + "?";
    default: return "Who is " + verb + " the " + adj + " " + noun + " " + place + "?";
  }
}

std::vector<Question> QuestionGenerator::make(std::size_t n, const std::string& id_prefix) {
  std::vector<Question> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(id_prefix + std::to_string(i), next_text());
  return out;
}

Question random_token_question(std::mt19937_64& rng, std::size_t vocab, std::size_t max_len,
                               const std::string& id) {
  const std::size_t len = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
  std::string text;
  for (std::size_t i = 0; i < len; ++i) {
    if (i > 0) text.push_back(' ');
    text += "w" + std::to_string(std::uniform_int_distribution<std::size_t>(0, vocab - 1)(rng));
  }
  return Question(id, text);
}

}  // namespace bqbench::testing
