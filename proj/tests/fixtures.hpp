#pragma once

#include <string>
#include <vector>

#include "amiedot/model.hpp"
#include "amiedot/store.hpp"

namespace amiedot::testing {

inline Timestamp ts(const char* text) { return *parse_timestamp(text); }

inline UserRecord make_user(std::string ref, std::optional<std::string> social_class = "staff",
                            std::optional<std::string> region = "north") {
  UserRecord u;
  u.annotator_ref = std::move(ref);
  u.first_name = "Ada";
  u.last_name = "Lovelace";
  u.email = u.annotator_ref + "@example.org";
  u.region = std::move(region);
  u.age_group = AgeGroup::from_26_to_40;
  u.country = "FR";
  u.social_class = std::move(social_class);
  u.area_of_activity = AreaOfActivity{ActivityKind::research};
  return u;
}

inline DocumentRecord make_doc(std::string ref, std::set<std::string> keywords = {},
                               FormatKind format = FormatKind::pdf) {
  DocumentRecord d;
  d.doc_ref = std::move(ref);
  d.title = "Title of " + d.doc_ref;
  d.keywords = std::move(keywords);
  d.authors = {{"Jean", "Dupont"}};
  d.publication_date = Date{2001, 5, 17};
  d.format = DocumentFormat{format};
  return d;
}

inline ConsultationEvent make_event(std::string ref, std::string user, std::string doc, std::int64_t start,
                                    std::optional<std::int64_t> duration = std::nullopt,
                                    ReasonKind reason = ReasonKind::academic_reading) {
  ConsultationEvent e;
  e.event_ref = std::move(ref);
  e.annotator_ref = std::move(user);
  e.doc_ref = std::move(doc);
  e.session_start = Timestamp{start};
  e.duration_seconds = duration;
  e.reason = ConsultationReason{reason};
  return e;
}

inline AnnotationRecord make_annotation(std::string ref, AnnotationObjective objective, std::string body) {
  AnnotationRecord a;
  a.annotation_ref = std::move(ref);
  a.a_type = AnnotationType::text;
  a.location = AnnotationLocation::left_margin;
  a.objective = objective;
  a.body = std::move(body);
  return a;
}

/// Registers users and documents in an in-memory (or given) store.
inline void seed_registry(Store& store, const std::vector<std::string>& users,
                          const std::vector<std::string>& docs) {
  for (const auto& u : users) store.register_user(make_user(u));
  for (const auto& d : docs) store.register_document(make_doc(d));
}

}  // namespace amiedot::testing

#include <filesystem>
#include <random>

namespace amiedot::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("amiedot-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path file(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline StoreOptions fast_options() {
  StoreOptions o;
  o.sync_writes = false;
  return o;
}

}  // namespace amiedot::testing
