// vidctx command-line interface: answer single questions, evaluate datasets,
// sweep ablation variants, inspect the call cache.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "vidctx/cache.hpp"
#include "vidctx/config.hpp"
#include "vidctx/errors.hpp"
#include "vidctx/harness.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
    std::string config_path;
    int frames = 0;
    std::string context;
    std::string captions;
    std::string agg;
    bool captions_only = false;
    int concurrency = 0;
    std::string backend_kind;
    std::string endpoint;
    std::string model;
    std::string cache_dir;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags) {
    cmd->add_option("--config", flags->config_path, "JSON config file");
    cmd->add_option("--frames", flags->frames, "frames sampled per video");
    cmd->add_option("--context", flags->context,
                    "context strategy: none|current|distant|concat:K");
    cmd->add_option("--captions", flags->captions, "caption mode: qaware|static");
    cmd->add_option("--agg", flags->agg,
                    "aggregation: l1max|softmaxmax|softmaxmean|mean|max|vote");
    cmd->add_flag("--captions-only", flags->captions_only,
                  "single text-only call over concatenated captions");
    cmd->add_option("--concurrency", flags->concurrency,
                    "parallel backend calls per question");
    cmd->add_option("--backend", flags->backend_kind, "backend kind: remote|mock");
    cmd->add_option("--endpoint", flags->endpoint, "OpenAI-compatible base URL");
    cmd->add_option("--model", flags->model, "model id");
    cmd->add_option("--cache-dir", flags->cache_dir, "cache directory");
}

struct DatasetFlags {
    std::string kind;
    std::string annotations;
    std::string video_root;
    std::string category_field;
};

void add_dataset_flags(CLI::App* cmd, DatasetFlags* flags) {
    cmd->add_option("--dataset", flags->kind, "dataset kind: nextqa|star");
    cmd->add_option("--annotations", flags->annotations, "annotation file");
    cmd->add_option("--video-root", flags->video_root,
                    "directory holding videos or frame directories");
    cmd->add_option("--category-field", flags->category_field,
                    "annotation field carrying the question category");
}

// Config file first, CLI flags override. Exit code 2 on config load problems.
vidctx::RunConfig resolve_config(const CommonFlags& flags) {
    vidctx::RunConfig config;
    if (!flags.config_path.empty()) {
        config = vidctx::load_run_config(flags.config_path);
    }
    vidctx::PipelineConfig& p = config.pipeline;
    if (flags.frames > 0) p.n_frames = flags.frames;
    if (!flags.context.empty()) {
        p.context_strategy =
            vidctx::context_strategy_from_string(flags.context, &p.concat_k);
    }
    if (!flags.captions.empty()) {
        p.caption_mode = vidctx::caption_mode_from_string(flags.captions);
    }
    if (!flags.agg.empty()) p.aggregation = vidctx::aggregation_from_string(flags.agg);
    if (flags.captions_only) {
        p.captions_only = true;
        p.context_strategy = vidctx::ContextStrategy::ConcatCaptions;
    }
    if (flags.concurrency > 0) p.concurrency_limit = flags.concurrency;
    if (!flags.backend_kind.empty()) {
        p.backend.kind = vidctx::backend_kind_from_string(flags.backend_kind);
    }
    if (!flags.endpoint.empty()) p.backend.endpoint = flags.endpoint;
    if (!flags.model.empty()) p.backend.model_id = flags.model;
    if (!flags.cache_dir.empty()) p.cache_dir = flags.cache_dir;
    return config;
}

vidctx::DatasetDescriptor resolve_dataset(const vidctx::RunConfig& config,
                                          const DatasetFlags& flags) {
    vidctx::DatasetDescriptor desc =
        config.dataset ? *config.dataset : vidctx::DatasetDescriptor{};
    if (!flags.kind.empty()) desc.kind = vidctx::dataset_kind_from_string(flags.kind);
    if (!flags.annotations.empty()) desc.annotation_path = flags.annotations;
    if (!flags.video_root.empty()) desc.video_root = flags.video_root;
    if (!flags.category_field.empty()) desc.category_field_name = flags.category_field;
    if (desc.annotation_path.empty()) {
        throw vidctx::InvalidArgument(
            "no annotation file: pass --annotations or a config dataset section");
    }
    return desc;
}

std::string resolve_cache_dir(const CommonFlags& flags) {
    if (!flags.cache_dir.empty()) return flags.cache_dir;
    if (!flags.config_path.empty()) {
        return vidctx::load_run_config(flags.config_path).pipeline.cache_dir;
    }
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Training-free video question answering over an OpenAI-compatible "
                 "multimodal endpoint"};
    app.require_subcommand(1);

    // answer
    CLI::App* answer_cmd =
        app.add_subcommand("answer", "Answer one question about one video");
    CommonFlags answer_flags;
    std::string video_path;
    std::string question;
    std::vector<std::string> options;
    std::string manifest_path;
    answer_cmd->add_option("video", video_path, "video file or frame directory")
        ->required();
    answer_cmd->add_option("--question,-q", question, "question text")->required();
    answer_cmd->add_option("--option,-o", options, "candidate answer (repeat 2..5 times)")
        ->required();
    answer_cmd->add_option("--manifest", manifest_path,
                           "write decision evidence as JSON to this file");
    add_common_flags(answer_cmd, &answer_flags);

    // evaluate
    CLI::App* eval_cmd = app.add_subcommand("evaluate", "Evaluate a dataset");
    CommonFlags eval_flags;
    DatasetFlags eval_dataset;
    std::string eval_out = "vidctx-run";
    std::int64_t limit = -1;
    int question_concurrency = 1;
    bool progress = false;
    eval_cmd->add_option("--out", eval_out, "output directory for manifest and reports");
    eval_cmd->add_option("--limit", limit, "evaluate only the first N questions");
    eval_cmd->add_option("--question-concurrency", question_concurrency,
                         "questions processed in parallel");
    eval_cmd->add_flag("--progress", progress, "per-question progress on stderr");
    add_dataset_flags(eval_cmd, &eval_dataset);
    add_common_flags(eval_cmd, &eval_flags);

    // ablate
    CLI::App* ablate_cmd =
        app.add_subcommand("ablate", "Evaluate a sweep of config variants");
    CommonFlags ablate_flags;
    DatasetFlags ablate_dataset;
    std::string ablate_out = "vidctx-ablate";
    std::string sweep_text;
    std::int64_t ablate_limit = -1;
    int ablate_qc = 1;
    ablate_cmd->add_option("--out", ablate_out, "output directory");
    ablate_cmd
        ->add_option("--sweep", sweep_text,
                     "agg | agg:v1,v2 | frames:1,2,4 | context:none,distant,concat:16")
        ->required();
    ablate_cmd->add_option("--limit", ablate_limit, "evaluate only the first N questions");
    ablate_cmd->add_option("--question-concurrency", ablate_qc,
                           "questions processed in parallel");
    add_dataset_flags(ablate_cmd, &ablate_dataset);
    add_common_flags(ablate_cmd, &ablate_flags);

    // cache
    CLI::App* cache_cmd = app.add_subcommand("cache", "Inspect or clear the call cache");
    cache_cmd->require_subcommand(1);
    CLI::App* cache_inspect = cache_cmd->add_subcommand("inspect", "Show cache contents");
    CLI::App* cache_clear = cache_cmd->add_subcommand("clear", "Delete cached records");
    CommonFlags cache_flags;
    cache_inspect->add_option("--config", cache_flags.config_path, "JSON config file");
    cache_inspect->add_option("--cache-dir", cache_flags.cache_dir, "cache directory");
    CommonFlags clear_flags;
    cache_clear->add_option("--config", clear_flags.config_path, "JSON config file");
    cache_clear->add_option("--cache-dir", clear_flags.cache_dir, "cache directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (answer_cmd->parsed()) {
            vidctx::RunConfig config;
            try {
                config = resolve_config(answer_flags);
            } catch (const vidctx::StorageError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
            vidctx::AnswerRequest request{video_path, question, options};
            const auto outcome = vidctx::answer_question(request, config.pipeline);
            std::cout << vidctx::format_answer(outcome);
            if (!manifest_path.empty()) {
                std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
                if (!out) {
                    throw vidctx::StorageError("cannot write " + manifest_path);
                }
                out << vidctx::answer_manifest_json(outcome, config.pipeline);
            }
            return 0;
        }

        if (eval_cmd->parsed()) {
            vidctx::RunConfig config;
            try {
                config = resolve_config(eval_flags);
            } catch (const vidctx::StorageError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
            const auto desc = resolve_dataset(config, eval_dataset);
            vidctx::EvalOptions eval_options;
            eval_options.out_dir = eval_out;
            eval_options.limit = limit;
            eval_options.question_concurrency = question_concurrency;
            eval_options.print_progress = progress;
            const auto outcome =
                vidctx::evaluate_dataset(desc, config.pipeline, eval_options);
            std::cout << vidctx::format_report(outcome.report);
            std::cout << "manifest: " << outcome.manifest_path.string() << "\n";
            return 0;
        }

        if (ablate_cmd->parsed()) {
            vidctx::RunConfig config;
            try {
                config = resolve_config(ablate_flags);
            } catch (const vidctx::StorageError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
            const auto desc = resolve_dataset(config, ablate_dataset);
            const auto sweep = vidctx::parse_sweep(sweep_text);
            vidctx::EvalOptions eval_options;
            eval_options.out_dir = ablate_out;
            eval_options.limit = ablate_limit;
            eval_options.question_concurrency = ablate_qc;
            const auto outcome =
                vidctx::ablate(desc, config.pipeline, sweep, eval_options);
            std::cout << vidctx::format_ablate(outcome);
            std::cout << "report: " << outcome.report_txt_path.string() << "\n";
            return 0;
        }

        if (cache_inspect->parsed() || cache_clear->parsed()) {
            const CommonFlags& flags =
                cache_inspect->parsed() ? cache_flags : clear_flags;
            std::string dir;
            try {
                dir = resolve_cache_dir(flags);
            } catch (const vidctx::StorageError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
            if (dir.empty()) {
                std::cerr << "error: no cache directory configured (use --cache-dir "
                             "or a config with cache_dir)\n";
                return 1;
            }
            if (cache_inspect->parsed()) {
                if (!fs::exists(dir)) {
                    std::cout << "cache " << dir << ": empty (directory does not exist)\n";
                    return 0;
                }
                vidctx::CacheStore store{dir};
                std::cout << "cache " << dir << ":\n";
                std::cout << "  captions: " << store.caption_count() << " records\n";
                std::cout << "  scores:   " << store.score_count() << " records\n";
                return 0;
            }
            std::size_t removed = 0;
            for (const char* name :
                 {vidctx::CacheStore::kCaptionsFile, vidctx::CacheStore::kScoresFile}) {
                std::error_code ec;
                if (fs::remove(fs::path(dir) / name, ec)) ++removed;
            }
            std::cout << "cache " << dir << ": removed " << removed << " file(s)\n";
            return 0;
        }
    } catch (const vidctx::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
