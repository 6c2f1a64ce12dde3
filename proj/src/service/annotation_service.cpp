#include "chainnet/service/annotation_service.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "chainnet/validate.hpp"

namespace chainnet {

std::string_view to_string(TaskStatus status) {
    switch (status) {
        case TaskStatus::Pending: return "pending";
        case TaskStatus::InProgress: return "in_progress";
        case TaskStatus::Submitted: return "submitted";
    }
    return "?";
}

TaskStatus parse_task_status(std::string_view text) {
    if (text == "pending") return TaskStatus::Pending;
    if (text == "in_progress") return TaskStatus::InProgress;
    if (text == "submitted") return TaskStatus::Submitted;
    throw DataError("unknown task status '" + std::string(text) + "'");
}

Json to_json(const AnnotationTask& task) {
    return Json{{"id", task.id},
                {"word", task.word},
                {"annotator", task.annotator ? Json(*task.annotator) : Json(nullptr)},
                {"status", std::string(to_string(task.status))},
                {"version", task.version},
                {"draft", to_json(task.draft)},
                {"submitted", task.submitted ? to_json(*task.submitted) : Json(nullptr)}};
}

AnnotationTask task_from_json(const Json& doc) {
    AnnotationTask t;
    t.id = doc.at("id").get<std::string>();
    t.word = doc.at("word").get<std::string>();
    if (!doc.at("annotator").is_null()) t.annotator = doc.at("annotator").get<std::string>();
    t.status = parse_task_status(doc.at("status").get<std::string>());
    t.version = doc.at("version").get<long>();
    t.draft = draft_from_json(doc.at("draft"));
    if (!doc.at("submitted").is_null()) t.submitted = word_annotation_from_json(doc.at("submitted"));
    return t;
}

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

AnnotationService::AnnotationService(SenseInventory inventory, const std::vector<std::string>& words,
                                     ServiceOptions options)
    : inventory_(std::move(inventory)), options_(std::move(options)) {
    if (options_.replicas < 1) throw UsageError("replicas must be at least 1");
    if (options_.store_dir.empty()) throw UsageError("a store directory is required");
    std::filesystem::create_directories(options_.store_dir);
    for (const auto& word : words) {
        const auto* senses = inventory_.find(word);
        if (!senses) throw UsageError("word '" + word + "' is not in the inventory");
        for (int r = 1; r <= options_.replicas; ++r) {
            AnnotationTask t;
            t.id = r == 1 ? word : word + "~" + std::to_string(r);
            t.word = word;
            t.draft = empty_draft(word, *senses);
            if (tasks_.contains(t.id)) continue;
            order_.push_back(t.id);
            tasks_.emplace(t.id, std::move(t));
        }
    }
    load();
}

void AnnotationService::load() {
    std::uint64_t snapshot_sequence = 0;
    const auto snapshot_path = options_.store_dir / "snapshot.json";
    if (std::filesystem::exists(snapshot_path)) {
        std::ifstream in(snapshot_path);
        Json snap;
        try {
            snap = Json::parse(in);
        } catch (const Json::exception& e) {
            throw DataError(snapshot_path.string() + ": " + e.what());
        }
        snapshot_sequence = snap.at("sequence").get<std::uint64_t>();
        for (const auto& doc : snap.at("tasks")) {
            auto t = task_from_json(doc);
            if (!tasks_.contains(t.id)) order_.push_back(t.id);
            tasks_[t.id] = std::move(t);
        }
        sequence_ = snapshot_sequence;
    }
    const auto log_path = options_.store_dir / "events.jsonl";
    std::ifstream in(log_path);
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (line.empty()) continue;
        Json event;
        try {
            event = Json::parse(line);
        } catch (const Json::parse_error&) {
            if (in.peek() == std::char_traits<char>::eof()) break;  // torn final write
            throw DataError(log_path.string() + ":" + std::to_string(lineno) + ": malformed event");
        }
        const auto seq = event.at("sequence").get<std::uint64_t>();
        const auto id = event.at("task").at("id").get<std::string>();
        history_[id].push_back(event);
        if (seq <= snapshot_sequence) continue;
        auto t = task_from_json(event.at("task"));
        if (!tasks_.contains(t.id)) order_.push_back(t.id);
        tasks_[t.id] = std::move(t);
        sequence_ = std::max(sequence_, seq);
    }
}

void AnnotationService::record(const std::string& type, const AnnotationTask& task, const std::string& annotator,
                               Json extra) {
    Json event{{"sequence", ++sequence_}, {"time", utc_now()}, {"type", type}, {"annotator", annotator},
               {"version", task.version}};
    for (auto& [key, value] : extra.items()) event[key] = value;
    event["task"] = to_json(task);
    {
        std::ofstream out(options_.store_dir / "events.jsonl", std::ios::app);
        out << event.dump() << '\n';
        out.flush();
        if (!out) throw ServiceError(500, "failed to append to the event log");
    }
    history_[task.id].push_back(std::move(event));
    if (++since_snapshot_ >= options_.snapshot_every) write_snapshot();
}

void AnnotationService::write_snapshot() {
    Json tasks = Json::array();
    for (const auto& id : order_) tasks.push_back(to_json(tasks_.at(id)));
    const Json snap{{"sequence", sequence_}, {"tasks", std::move(tasks)}};
    const auto tmp = options_.store_dir / "snapshot.json.tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << snap.dump() << '\n';
        if (!out) throw ServiceError(500, "failed to write snapshot");
    }
    std::filesystem::rename(tmp, options_.store_dir / "snapshot.json");
    since_snapshot_ = 0;
}

AnnotationTask& AnnotationService::task_ref(const std::string& id) {
    auto it = tasks_.find(id);
    if (it == tasks_.end()) throw ServiceError(404, "no task '" + id + "'");
    return it->second;
}

const AnnotationTask& AnnotationService::task_ref(const std::string& id) const {
    auto it = tasks_.find(id);
    if (it == tasks_.end()) throw ServiceError(404, "no task '" + id + "'");
    return it->second;
}

void AnnotationService::require_owner(const AnnotationTask& task, const std::string& annotator) const {
    if (task.status == TaskStatus::Pending) throw ServiceError(409, "task '" + task.id + "' has not been assigned");
    if (task.annotator != annotator) throw ServiceError(409, "task '" + task.id + "' is assigned to another annotator");
}

void AnnotationService::require_version(const AnnotationTask& task, long expected) const {
    if (task.version != expected) {
        throw ServiceError(409, "task '" + task.id + "' is at version " + std::to_string(task.version) +
                                    ", not " + std::to_string(expected));
    }
}

Draft AnnotationService::parse_draft(const AnnotationTask& task, const Json& doc) const {
    Draft incoming;
    try {
        incoming = draft_from_json(doc);
    } catch (const DataError& e) {
        throw ServiceError(400, std::string("malformed draft: ") + e.what());
    } catch (const Json::exception& e) {
        throw ServiceError(400, std::string("malformed draft: ") + e.what());
    }
    std::set<SenseIndex> expected;
    for (const auto& s : task.draft.senses) expected.insert(s.record.id);
    std::set<SenseIndex> got;
    for (const auto& s : incoming.senses) {
        if (!got.insert(s.record.id).second) throw ServiceError(400, "draft lists sense " + s.record.id.to_string() + " twice");
    }
    if (got != expected) throw ServiceError(400, "draft senses do not match the task; use an edit to change them");
    Draft out = task.draft;
    out.word = task.word;
    out.annotator = task.annotator.value_or("");
    out.word_known = incoming.word_known;
    for (auto& s : out.senses) {
        const auto* in = incoming.find(s.record.id);
        s.label = in->label;
        s.parent = in->parent;
        s.conduit = in->conduit;
        s.features = in->features;
        s.judgements = in->judgements;
        s.record.known = in->record.known;
    }
    return out;
}

std::optional<AnnotationTask> AnnotationService::next_task(const std::string& annotator) {
    std::unique_lock lock(mutex_);
    std::set<std::string> held;
    for (const auto& id : order_) {
        const auto& t = tasks_.at(id);
        if (t.annotator != annotator) continue;
        if (t.status == TaskStatus::InProgress) return t;
        held.insert(t.word);
    }
    for (const auto& id : order_) {
        auto& t = tasks_.at(id);
        if (t.status != TaskStatus::Pending || held.contains(t.word)) continue;
        t.annotator = annotator;
        t.status = TaskStatus::InProgress;
        t.draft.annotator = annotator;
        ++t.version;
        record("assign", t, annotator, Json::object());
        return t;
    }
    return std::nullopt;
}

AnnotationTask AnnotationService::get_task(const std::string& id) const {
    std::shared_lock lock(mutex_);
    return task_ref(id);
}

ValidationResponse AnnotationService::check(const std::string& id, const Json& draft) const {
    std::shared_lock lock(mutex_);
    return check_draft(parse_draft(task_ref(id), draft));
}

AnnotationTask AnnotationService::edit(const std::string& id, const std::string& annotator, long expected_version,
                                       const EditOp& op, const std::optional<Json>& draft) {
    std::unique_lock lock(mutex_);
    auto& task = task_ref(id);
    require_owner(task, annotator);
    require_version(task, expected_version);
    Draft updated = draft ? parse_draft(task, *draft) : task.draft;
    try {
        apply_edit(updated, op, inventory_.find(task.word));
    } catch (const UsageError& e) {
        throw ServiceError(400, e.what());
    }
    task.draft = std::move(updated);
    task.status = TaskStatus::InProgress;
    ++task.version;
    record("edit", task, annotator, Json{{"edit", to_json(op)}});
    return task;
}

SubmitOutcome AnnotationService::submit(const std::string& id, const std::string& annotator, long expected_version,
                                        const Json& draft) {
    std::unique_lock lock(mutex_);
    auto& task = task_ref(id);
    require_owner(task, annotator);
    require_version(task, expected_version);
    auto parsed = parse_draft(task, draft);
    SubmitOutcome out;
    out.check = check_draft(parsed);
    const auto full = to_annotation(parsed);
    if (full) {
        out.check.violations = validate(*full);
        out.check.submittable = out.check.complete && out.check.violations.empty();
    }
    if (!out.check.submittable) {
        out.task = task;
        return out;
    }
    task.draft = std::move(parsed);
    task.submitted = *full;
    task.status = TaskStatus::Submitted;
    ++task.version;
    record("submit", task, annotator, Json::object());
    out.accepted = true;
    out.task = task;
    return out;
}

std::string AnnotationService::export_jsonl() const {
    std::shared_lock lock(mutex_);
    std::vector<const WordAnnotation*> out;
    for (const auto& [id, task] : tasks_) {
        if (task.submitted && is_valid(*task.submitted)) out.push_back(&*task.submitted);
    }
    std::sort(out.begin(), out.end(), [](const WordAnnotation* a, const WordAnnotation* b) {
        return std::tie(a->word, a->annotator) < std::tie(b->word, b->annotator);
    });
    std::string text;
    for (const auto* a : out) text += to_json(*a).dump() + "\n";
    return text;
}

Json AnnotationService::history(const std::string& id) const {
    std::shared_lock lock(mutex_);
    task_ref(id);
    auto it = history_.find(id);
    if (it == history_.end()) return Json::array();
    Json out = Json::array();
    for (const auto& e : it->second) out.push_back(e);
    return out;
}

std::optional<Json> AnnotationService::gloss(const std::string& lemma) const {
    const auto* senses = inventory_.find(lemma);
    if (!senses) return std::nullopt;
    Json list = Json::array();
    for (const auto& s : *senses) {
        list.push_back(Json{{"id", s.record.id.to_string()},
                            {"definition", s.record.definition},
                            {"synonyms", s.record.synonyms}});
    }
    return Json{{"lemma", lemma}, {"senses", std::move(list)}};
}

std::size_t AnnotationService::task_count() const {
    std::shared_lock lock(mutex_);
    return tasks_.size();
}

std::map<std::string, std::string> load_tokens(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::map<std::string, std::string> out;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        std::istringstream fields(line);
        std::string token, annotator, extra;
        if (!(fields >> token) || token.front() == '#') continue;
        if (!(fields >> annotator) || (fields >> extra)) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": expected 'token annotator'");
        }
        if (!out.emplace(token, annotator).second) {
            throw DataError(path.string() + ":" + std::to_string(lineno) + ": duplicate token");
        }
    }
    return out;
}

}  // namespace chainnet
