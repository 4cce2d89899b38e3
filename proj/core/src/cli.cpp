#include "varjet/cli.hpp"

#include <chrono>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "varjet/modelfile.hpp"
#include "varjet/parser.hpp"

namespace varjet {

namespace {

using nlohmann::json;

struct CommonOpts {
    std::string model_path;
    std::string builtin;
    std::string field;
    std::string output = "text";
    int order_bound = 0;
    double timeout = 0.0;
};

void add_model_options(CLI::App* cmd, CommonOpts& o, bool with_field) {
    auto* model = cmd->add_option("--model", o.model_path, "Model file (JSON)");
    auto* builtin = cmd->add_option("--builtin", o.builtin, "Builtin model name");
    model->excludes(builtin);
    if (with_field)
        cmd->add_option("--field", o.field, "Named vector field from the model")
            ->required();
    cmd->add_option("--output", o.output, "Output format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--order-bound", o.order_bound, "Override the admitted jet order");
    cmd->add_option("--timeout", o.timeout, "Abort after this many seconds");
}

Model load_model(const CommonOpts& o) {
    if (!o.model_path.empty()) {
        Model m = load_model_file(o.model_path);
        if (o.order_bound > 0) m.bundle = m.bundle.with_order_bound(o.order_bound);
        return m;
    }
    if (!o.builtin.empty()) {
        Model m = builtin_model(o.builtin);
        if (o.order_bound > 0) m.bundle = m.bundle.with_order_bound(o.order_bound);
        return m;
    }
    throw ModelError("either --model or --builtin is required");
}

struct DeadlineGuard {
    explicit DeadlineGuard(double seconds) {
        if (seconds > 0.0)
            engine::set_deadline(std::chrono::steady_clock::now() +
                                 std::chrono::milliseconds(
                                     static_cast<long long>(seconds * 1000.0)));
    }
    ~DeadlineGuard() { engine::set_deadline(std::nullopt); }
};

struct Outcome {
    int code = 0;
    std::string text;    // without trailing newline handling; lines joined already
    json result = json::object();
};

const char* status_for(int code) {
    switch (code) {
        case 0: return "ok";
        case 1: return "false";
        case 2: return "error";
        default: return "failed";
    }
}

Outcome verdict_outcome(const char* key, bool v) {
    Outcome r;
    r.code = v ? 0 : 1;
    r.text = std::string(key) + ": " + (v ? "true" : "false");
    r.result["verdict"] = v;
    return r;
}

Outcome components_outcome(const std::vector<std::pair<std::string, std::string>>& kv) {
    Outcome r;
    json comps = json::object();
    std::string text;
    for (const auto& [k, v] : kv) {
        if (!text.empty()) text += "\n";
        text += k + " = " + v;
        comps[k] = v;
    }
    r.text = text;
    r.result["components"] = comps;
    return r;
}

Outcome run_el(const Model& m) {
    if (!m.lagrangian) throw ModelError("model has no lagrangian");
    const SourceEquation T = euler_lagrange(*m.lagrangian, m.bundle);
    std::vector<std::pair<std::string, std::string>> kv;
    const auto& comps = m.bundle.components();
    for (std::size_t k = 0; k < comps.size(); ++k)
        kv.emplace_back("T[" + m.bundle.component_name(comps[k]) + "]",
                        to_string(T.comps[k], m.bundle));
    return components_outcome(kv);
}

Outcome run_check_variational(const Model& m) {
    const SourceEquation T = effective_source(m);
    try {
        return verdict_outcome("variational", is_locally_variational(T, m.bundle));
    } catch (const Error&) {
        // Tonti homotopy not admissible (square roots / negative powers);
        // fall back to the constructive certificate source = E(L).
        if (!m.lagrangian) throw;
        if (!m.source) return verdict_outcome("variational", true);
        const SourceEquation derived = euler_lagrange(*m.lagrangian, m.bundle);
        for (std::size_t k = 0; k < T.comps.size(); ++k)
            if (!(derived.comps[k] - T.comps[k]).is_zero())
                throw InvariantError(
                    "cannot decide variationality: Tonti homotopy inadmissible and "
                    "the stored source differs from E(L)");
        return verdict_outcome("variational", true);
    }
}

Outcome run_null(const Model& m) {
    if (!m.lagrangian) throw ModelError("model has no lagrangian");
    return verdict_outcome("null-lagrangian", is_null_lagrangian(*m.lagrangian, m.bundle));
}

const EvolutionaryField& named_field(const Model& m, const std::string& name) {
    const EvolutionaryField* v = find_symmetry(m, name);
    if (!v) throw ModelError("model has no vector field named '" + name + "'");
    return *v;
}

Outcome run_symmetry(const Model& m, const std::string& field) {
    return verdict_outcome(
        "symmetry", is_symmetry(named_field(m, field), effective_source(m), m.bundle));
}

Outcome run_current(const Model& m, const std::string& field) {
    const HorizontalForm omega =
        conserved_current(named_field(m, field), effective_source(m), m.bundle);
    std::vector<std::pair<std::string, std::string>> kv;
    for (int i = 1; i <= m.bundle.dim(); ++i)
        kv.emplace_back("omega[" + std::to_string(i) + "]",
                        to_string(omega.comps[static_cast<std::size_t>(i - 1)], m.bundle));
    return components_outcome(kv);
}

Outcome run_divergence(const Model& m) {
    const DivergenceCovector div = generalized_divergence(effective_source(m), m.bundle);
    std::vector<std::pair<std::string, std::string>> kv;
    for (int i = 1; i <= m.bundle.dim(); ++i)
        kv.emplace_back("Div[" + std::to_string(i) + "]",
                        to_string(div.comps[static_cast<std::size_t>(i - 1)], m.bundle));
    return components_outcome(kv);
}

Outcome run_check_natural(const Model& m) {
    return verdict_outcome("natural", is_natural(effective_source(m), m.bundle));
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
    CLI::App app{"exact variational calculus on jet bundles"};
    app.name("varjet");
    app.require_subcommand(1);

    CommonOpts opts;
    std::string export_name;

    CLI::App* el = app.add_subcommand("el", "Euler-Lagrange source of the Lagrangian");
    add_model_options(el, opts, false);
    CLI::App* checkvar =
        app.add_subcommand("check-variational", "Tonti roundtrip verdict");
    add_model_options(checkvar, opts, false);
    CLI::App* null_cmd = app.add_subcommand("null", "Null-Lagrangian verdict");
    add_model_options(null_cmd, opts, false);
    CLI::App* symmetry =
        app.add_subcommand("symmetry", "Infinitesimal symmetry verdict for --field");
    add_model_options(symmetry, opts, true);
    CLI::App* current =
        app.add_subcommand("current", "Noether conserved current for --field");
    add_model_options(current, opts, true);
    CLI::App* divergence =
        app.add_subcommand("divergence", "Generalized divergence of the source");
    add_model_options(divergence, opts, false);
    CLI::App* checknat = app.add_subcommand("check-natural", "Noether II verdict");
    add_model_options(checknat, opts, false);
    CLI::App* list = app.add_subcommand("list-models", "List builtin models");
    list->add_option("--output", opts.output, "Output format: text|json")
        ->check(CLI::IsMember({"text", "json"}));
    CLI::App* exportm =
        app.add_subcommand("export-model", "Print a builtin model as a model file");
    exportm->add_option("name", export_name, "Builtin model name")->required();
    exportm->add_option("--output", opts.output, "Output format: text|json")
        ->check(CLI::IsMember({"text", "json"}));

    std::vector<const char*> argv;
    argv.push_back("varjet");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    const bool json_mode = opts.output == "json";
    std::string model_display;

    Outcome outcome;
    try {
        DeadlineGuard guard(opts.timeout);
        if (command == "list-models") {
            std::string text;
            json names = json::array();
            for (const std::string& n : builtin_model_names()) {
                if (!text.empty()) text += "\n";
                text += n;
                names.push_back(n);
            }
            outcome.text = text;
            outcome.result["models"] = names;
        } else if (command == "export-model") {
            const Model m = builtin_model(export_name);
            model_display = m.name;
            outcome.text = model_to_json(m);
            outcome.result["model_file"] = json::parse(outcome.text);
        } else {
            const Model m = load_model(opts);
            model_display = m.name;
            if (command == "el")
                outcome = run_el(m);
            else if (command == "check-variational")
                outcome = run_check_variational(m);
            else if (command == "null")
                outcome = run_null(m);
            else if (command == "symmetry")
                outcome = run_symmetry(m, opts.field);
            else if (command == "current")
                outcome = run_current(m, opts.field);
            else if (command == "divergence")
                outcome = run_divergence(m);
            else if (command == "check-natural")
                outcome = run_check_natural(m);
        }
    } catch (const ExtractionError& e) {
        outcome.code = 3;
        outcome.result["error"] = std::string(e.what());
        outcome.result["residual"] = e.residual();
        outcome.text = "";
        err << "error: " << e.what() << "\n";
        err << "residual: " << e.residual() << "\n";
    } catch (const ParseError& e) {
        outcome.code = 2;
        outcome.result["error"] = std::string(e.what());
        err << "error: " << e.what() << "\n";
    } catch (const ModelError& e) {
        outcome.code = 2;
        outcome.result["error"] = std::string(e.what());
        err << "error: " << e.what() << "\n";
    } catch (const Error& e) {
        // invariant violations, order bound, cancellation: could not decide
        outcome.code = 3;
        outcome.result["error"] = std::string(e.what());
        err << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        outcome.code = 3;
        outcome.result["error"] = std::string(e.what());
        err << "error: " << e.what() << "\n";
    }

    if (json_mode) {
        json doc;
        doc["command"] = command;
        doc["model"] = model_display;
        doc["result"] = outcome.result;
        doc["status"] = status_for(outcome.code);
        out << doc.dump(2) << "\n";
    } else if (!outcome.text.empty()) {
        out << outcome.text << "\n";
    }
    return outcome.code;
}

} // namespace varjet
