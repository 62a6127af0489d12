#include "qacg/labels.hpp"

namespace qacg {

namespace {

constexpr std::array<std::string_view, kNumEntityTypes> kEntityTypeNames = {
    "PERSON", "NORP",        "FAC",  "ORG",      "GPE",  "LOC",
    "PRODUCT", "EVENT",      "WORK_OF_ART", "LAW", "LANGUAGE", "DATE",
    "TIME",   "PERCENT",     "MONEY", "QUANTITY", "ORDINAL", "CARDINAL"};

constexpr std::array<Label, 2> kSRLabels = {Label::kSupported,
                                            Label::kRefuted};

}  // namespace

std::string_view to_string(Label label) {
  switch (label) {
    case Label::kSupported:
      return "SUPPORTED";
    case Label::kRefuted:
      return "REFUTED";
    case Label::kNei:
      return "NEI";
  }
  return "NEI";
}

std::string_view to_fever_string(Label label) {
  switch (label) {
    case Label::kSupported:
      return "SUPPORTS";
    case Label::kRefuted:
      return "REFUTES";
    case Label::kNei:
      return "NOT ENOUGH INFO";
  }
  return "NOT ENOUGH INFO";
}

std::optional<Label> parse_label(std::string_view text) {
  for (Label label : kAllLabels) {
    if (text == to_string(label) || text == to_fever_string(label)) {
      return label;
    }
  }
  return std::nullopt;
}

std::string_view to_string(LabelSpace space) {
  return space == LabelSpace::kSR ? "SR" : "SRN";
}

std::optional<LabelSpace> parse_label_space(std::string_view text) {
  if (text == "SR" || text == "sr") return LabelSpace::kSR;
  if (text == "SRN" || text == "srn") return LabelSpace::kSRN;
  return std::nullopt;
}

std::span<const Label> labels_of(LabelSpace space) {
  if (space == LabelSpace::kSR) return kSRLabels;
  return kAllLabels;
}

bool contains(LabelSpace space, Label label) {
  return space == LabelSpace::kSRN || label != Label::kNei;
}

std::size_t num_classes(LabelSpace space) {
  return labels_of(space).size();
}

std::string_view to_string(EntityType type) {
  return kEntityTypeNames[static_cast<std::size_t>(type)];
}

std::optional<EntityType> parse_entity_type(std::string_view text) {
  for (std::size_t i = 0; i < kEntityTypeNames.size(); ++i) {
    if (kEntityTypeNames[i] == text) return static_cast<EntityType>(i);
  }
  return std::nullopt;
}

}  // namespace qacg
