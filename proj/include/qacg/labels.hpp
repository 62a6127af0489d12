#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qacg {

enum class Label { kSupported = 0, kRefuted = 1, kNei = 2 };

inline constexpr std::array<Label, 3> kAllLabels = {
    Label::kSupported, Label::kRefuted, Label::kNei};

/// Canonical interchange strings: SUPPORTED, REFUTED, NEI.
std::string_view to_string(Label label);
/// FEVER's strings: SUPPORTS, REFUTES, NOT ENOUGH INFO.
std::string_view to_fever_string(Label label);
/// Accepts the canonical strings and the FEVER strings.
std::optional<Label> parse_label(std::string_view text);

/// Two-way (supported/refuted) or three-way verification.
enum class LabelSpace { kSR, kSRN };

std::string_view to_string(LabelSpace space);
std::optional<LabelSpace> parse_label_space(std::string_view text);
std::span<const Label> labels_of(LabelSpace space);
bool contains(LabelSpace space, Label label);
std::size_t num_classes(LabelSpace space);

/// Entity-type inventory (the 18 OntoNotes named-entity tags). All
/// backends map their native tags into this set.
enum class EntityType {
  kPerson,
  kNorp,
  kFac,
  kOrg,
  kGpe,
  kLoc,
  kProduct,
  kEvent,
  kWorkOfArt,
  kLaw,
  kLanguage,
  kDate,
  kTime,
  kPercent,
  kMoney,
  kQuantity,
  kOrdinal,
  kCardinal,
};

inline constexpr std::size_t kNumEntityTypes = 18;

std::string_view to_string(EntityType type);
std::optional<EntityType> parse_entity_type(std::string_view text);

}  // namespace qacg
