#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainnet/annotation_json.hpp"
#include "chainnet/inventory.hpp"
#include "chainnet/service/draft.hpp"

namespace chainnet {

/// A request the service refuses; `status` is the HTTP code to report.
class ServiceError : public std::runtime_error {
public:
    ServiceError(int status, const std::string& message) : std::runtime_error(message), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

enum class TaskStatus { Pending, InProgress, Submitted };
std::string_view to_string(TaskStatus status);
TaskStatus parse_task_status(std::string_view text);

struct AnnotationTask {
    std::string id;
    std::string word;
    std::optional<std::string> annotator;
    TaskStatus status = TaskStatus::Pending;
    long version = 0;
    Draft draft;
    std::optional<WordAnnotation> submitted;
};

Json to_json(const AnnotationTask& task);
AnnotationTask task_from_json(const Json& doc);

struct SubmitOutcome {
    bool accepted = false;
    AnnotationTask task;
    ValidationResponse check;
};

struct ServiceOptions {
    std::filesystem::path store_dir;
    /// Annotators per word; replica r > 1 of word w has task id "w~r".
    int replicas = 1;
    /// Snapshot after this many events.
    std::size_t snapshot_every = 100;
};

/// Task queue, draft checking and submissions for one annotation campaign.
///
/// Every change is an event appended to events.jsonl in the store
/// directory; each event carries the task's full state afterwards, so
/// replaying the log reproduces the store. snapshot.json records the state
/// at some event so startup need not replay from the beginning.
class AnnotationService {
public:
    AnnotationService(SenseInventory inventory, const std::vector<std::string>& words, ServiceOptions options);

    /// The task locked to this annotator, or the first pending task in queue
    /// order (skipping words the annotator already holds). nullopt = done.
    std::optional<AnnotationTask> next_task(const std::string& annotator);

    AnnotationTask get_task(const std::string& id) const;

    /// Pure check of a draft against the task's current senses.
    ValidationResponse check(const std::string& id, const Json& draft) const;

    /// Optionally replaces the stored draft, then applies the edit.
    AnnotationTask edit(const std::string& id, const std::string& annotator, long expected_version, const EditOp& op,
                        const std::optional<Json>& draft);

    /// Accepted only when the draft is complete and valid; bumps the version.
    SubmitOutcome submit(const std::string& id, const std::string& annotator, long expected_version, const Json& draft);

    /// Latest submission of every task, one JSON document per line, ordered
    /// by word then annotator.
    std::string export_jsonl() const;

    /// Every recorded event of a task, oldest first.
    Json history(const std::string& id) const;

    /// Inventory definitions for a lemma; nullopt when it is not in the inventory.
    std::optional<Json> gloss(const std::string& lemma) const;

    std::size_t task_count() const;

private:
    AnnotationTask& task_ref(const std::string& id);
    const AnnotationTask& task_ref(const std::string& id) const;
    void require_owner(const AnnotationTask& task, const std::string& annotator) const;
    void require_version(const AnnotationTask& task, long expected) const;
    Draft parse_draft(const AnnotationTask& task, const Json& doc) const;
    void record(const std::string& type, const AnnotationTask& task, const std::string& annotator, Json extra);
    void write_snapshot();
    void load();

    SenseInventory inventory_;
    ServiceOptions options_;
    mutable std::shared_mutex mutex_;
    std::vector<std::string> order_;
    std::map<std::string, AnnotationTask> tasks_;
    std::map<std::string, std::vector<Json>> history_;
    std::uint64_t sequence_ = 0;
    std::size_t since_snapshot_ = 0;
};

/// "token annotator" lines; blank lines and '#' comments are ignored.
std::map<std::string, std::string> load_tokens(const std::filesystem::path& path);

}  // namespace chainnet
