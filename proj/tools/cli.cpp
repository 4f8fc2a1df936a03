// Copyright 2026 The qnfauth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "qnf/constellation.hpp"
#include "qnf/distributions.hpp"
#include "qnf/errors.hpp"
#include "qnf/fingerprinting.hpp"
#include "qnf/formats.hpp"
#include "qnf/harness.hpp"
#include "qnf/quantum_sim.hpp"

namespace qnf::cli {

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const std::string &content, const std::string &out_path, std::ostream &out) {
    if (out_path.empty()) {
        out << content;
        return;
    }
    const fs::path target(out_path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    std::ofstream f(target, std::ios::binary | std::ios::trunc);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + out_path);
}

std::vector<StoredFingerprint> load_fingerprints(const std::vector<std::string> &paths) {
    std::vector<StoredFingerprint> out;
    for (const auto &p : paths) {
        try {
            out.push_back(read_fingerprint_json(read_file(p)));
        } catch (const InvalidArgument &e) {
            throw InvalidArgument(p + ": " + e.what());
        }
    }
    return out;
}

struct SimulateArgs {
    int n = 5;
    uint64_t shots = 10000;
    uint64_t seed = 0;
    std::string device_path;
    std::optional<uint64_t> device_seed;
    bool noiseless = false;
    std::string out;
};

int run_simulate(const SimulateArgs &a, std::ostream &out) {
    const int sources = static_cast<int>(!a.device_path.empty()) + static_cast<int>(a.device_seed.has_value()) +
                        static_cast<int>(a.noiseless);
    if (sources != 1) throw UsageError("simulate needs exactly one of --device, --device-seed, --noiseless");
    DeviceNoiseParams device;
    if (a.noiseless) {
        device = DeviceNoiseParams::noiseless(a.n);
    } else if (a.device_seed) {
        device = draw_device(a.n, DeviceParamRanges{}, *a.device_seed);
    } else {
        device = parse_device_json(read_file(a.device_path));
        if (static_cast<int>(device.readout.size()) != a.n) {
            throw InvalidArgument("device file has " + std::to_string(device.readout.size()) + " qubits, --n is " +
                                  std::to_string(a.n));
        }
    }
    const Counts counts = sample_shots(device, build_ghz_circuit(a.n), a.shots, a.seed);
    emit(write_histogram_csv(counts), a.out, out);
    return kExitOk;
}

struct FingerprintArgs {
    std::string counts;
    uint32_t node_id = 0;
    std::string domain = "error-only";
    double alpha = 0.5;
    double gamma = 3.0;
    std::vector<std::string> validation;
    std::optional<double> threshold;
    std::string out;
};

int run_fingerprint(const FingerprintArgs &a, std::ostream &out) {
    if (a.validation.size() > 0 && a.threshold) throw UsageError("--threshold and --validate are exclusive");
    ClassifierConfig config;
    config.domain = parse_domain(a.domain);
    config.smoothing.alpha = a.alpha;
    config.margin = a.gamma;
    const Counts counts = read_histogram_csv(read_file(a.counts));
    const NoiseFingerprint fp = train_fingerprint(NodeId{a.node_id}, counts, config);
    std::optional<double> threshold = a.threshold;
    if (!a.validation.empty()) {
        std::vector<Counts> batches;
        for (const auto &p : a.validation) batches.push_back(read_histogram_csv(read_file(p)));
        threshold = calibrate_threshold(fp, batches, a.gamma);
    }
    emit(write_fingerprint_json(fp, threshold), a.out, out);
    return kExitOk;
}

struct AuthenticateArgs {
    std::string counts;
    std::vector<std::string> fingerprints;
    std::string mode = "min-kl";
    std::optional<std::string> domain;
    std::optional<double> threshold;
    std::string out;
};

int run_authenticate(const AuthenticateArgs &a, std::ostream &out) {
    const auto stored = load_fingerprints(a.fingerprints);
    std::vector<NoiseFingerprint> profiles;
    std::vector<double> thresholds;
    for (const auto &s : stored) {
        profiles.push_back(s.fingerprint);
        thresholds.push_back(a.threshold.value_or(s.threshold.value_or(0.0)));
    }
    ClassifierConfig config;
    config.mode = parse_mode(a.mode);
    config.domain = profiles.front().domain();
    if (a.domain && parse_domain(*a.domain) != config.domain) {
        throw InvalidArgument("--domain " + *a.domain + " does not match the fingerprints");
    }
    config.smoothing.alpha = profiles.front().alpha;
    for (const auto &p : profiles) {
        if (p.alpha != config.smoothing.alpha) throw InvalidArgument("fingerprints use different smoothing alpha");
    }
    const Counts observed = read_histogram_csv(read_file(a.counts));
    const AuthDecision decision = classify(observed, profiles, thresholds, config);
    emit(write_decision_json(decision), a.out, out);
    return decision.is_accept() ? kExitOk : kExitReject;
}

struct MatrixArgs {
    std::vector<std::string> fingerprints;
    std::string out;
};

int run_matrix(const MatrixArgs &a, std::ostream &out) {
    const auto stored = load_fingerprints(a.fingerprints);
    std::vector<NodeId> ids;
    std::vector<std::vector<double>> refs;
    for (const auto &s : stored) {
        if (s.fingerprint.domain() != stored.front().fingerprint.domain() ||
            s.fingerprint.num_qubits() != stored.front().fingerprint.num_qubits()) {
            throw InvalidArgument("fingerprints must share qubit count and domain");
        }
        ids.push_back(s.fingerprint.node_id);
        const auto probs = s.fingerprint.reference_probs();
        refs.emplace_back(probs.begin(), probs.end());
    }
    const SquareMatrix kl = kl_matrix(std::span<const std::vector<double>>(refs));
    emit(write_kl_matrix_csv(ids, kl), a.out, out);
    return kExitOk;
}

struct ExperimentArgs {
    std::string preset;
    std::string config;
    std::optional<uint64_t> seed;
    std::optional<std::string> mode;
    std::optional<std::string> domain;
    std::string out = "qnfauth-out";
};

int run_experiment_command(const ExperimentArgs &a, std::ostream &out, std::ostream &err) {
    if (a.preset.empty() == a.config.empty()) throw UsageError("experiment needs exactly one of --preset, --config");
    ConstellationConfig config =
        a.preset.empty() ? parse_config(a.config, a.seed) : preset_config(a.preset, a.seed.value_or(42));
    if (a.mode) config.classifier.mode = parse_mode(*a.mode);
    if (a.domain) config.classifier.domain = parse_domain(*a.domain);
    config.validate();
    for (const auto &w : config.warnings()) err << "warning: " << w << "\n";

    const ExperimentResult result = run_experiment(config);
    auto artifacts = render_experiment_artifacts(config, result);
    artifacts.push_back(render_manifest(config, artifacts));
    write_artifacts(a.out, artifacts);

    const auto &m = result.metrics;
    out << "wrote " << artifacts.size() << " artifacts to " << a.out << "\n"
        << "genuine_accept_rate " << format_real(m.genuine_accept_rate) << " (" << m.genuine_accepts << "/"
        << m.genuine_trials << ")\n"
        << "false_reject_rate " << format_real(m.false_reject_rate) << "\n";
    if (m.impostor_trials > 0) {
        out << "false_accept_rate " << format_real(m.false_accept_rate) << "\n"
            << "impostor_reject_rate " << format_real(m.impostor_reject_rate) << " (" << m.impostor_rejects << "/"
            << m.impostor_trials << ")\n";
    }
    return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum noise fingerprint authentication simulator", std::string(kToolName)};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    SimulateArgs sim;
    auto *simulate = app.add_subcommand("simulate", "Sample one device's GHZ histogram (bitstring,count CSV)");
    simulate->add_option("--n", sim.n, "Qubit count")->check(CLI::Range(kMinQubits, kMaxQubits));
    simulate->add_option("--shots", sim.shots, "Number of shots")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "Sampling seed");
    simulate->add_option("--device", sim.device_path, "Device JSON ({readout, p1, p2, device_seed})")
        ->check(CLI::ExistingFile);
    simulate->add_option("--device-seed", sim.device_seed, "Draw the device from the default ranges");
    simulate->add_flag("--noiseless", sim.noiseless, "Ideal device");
    simulate->add_option("--out", sim.out, "Output file (default stdout)");

    FingerprintArgs fpa;
    auto *fingerprint = app.add_subcommand("fingerprint", "Train a fingerprint file from a histogram CSV");
    fingerprint->add_option("--counts", fpa.counts, "Histogram CSV")->required()->check(CLI::ExistingFile);
    fingerprint->add_option("--node-id", fpa.node_id, "Transmitter id")->required();
    fingerprint->add_option("--domain", fpa.domain, "error-only | full");
    fingerprint->add_option("--alpha", fpa.alpha, "Smoothing pseudocount")->check(CLI::NonNegativeNumber);
    fingerprint->add_option("--gamma", fpa.gamma, "Calibration margin")->check(CLI::Range(1.0, 1e300));
    fingerprint->add_option("--validate", fpa.validation, "Validation histogram CSVs for threshold calibration")
        ->check(CLI::ExistingFile);
    fingerprint->add_option("--threshold", fpa.threshold, "Store a fixed threshold")->check(CLI::NonNegativeNumber);
    fingerprint->add_option("--out", fpa.out, "Output file (default stdout)");

    AuthenticateArgs auth;
    auto *authenticate = app.add_subcommand("authenticate", "Classify a histogram against fingerprints");
    authenticate->add_option("--counts", auth.counts, "Observed histogram CSV")
        ->required()
        ->check(CLI::ExistingFile);
    authenticate->add_option("--fingerprint", auth.fingerprints, "Fingerprint file (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);
    authenticate->add_option("--mode", auth.mode, "min-kl | multinomial");
    authenticate->add_option("--domain", auth.domain, "error-only | full (must match the fingerprints)");
    authenticate->add_option("--threshold", auth.threshold, "Override stored thresholds")
        ->check(CLI::NonNegativeNumber);
    authenticate->add_option("--out", auth.out, "Decision JSON file (default stdout)");

    MatrixArgs mat;
    auto *matrix = app.add_subcommand("matrix", "Pairwise KL matrix (nats) of fingerprints");
    matrix->add_option("--fingerprint", mat.fingerprints, "Fingerprint file (repeatable)")
        ->required()
        ->check(CLI::ExistingFile);
    matrix->add_option("--out", mat.out, "Output CSV (default stdout)");

    ExperimentArgs exp;
    auto *experiment = app.add_subcommand("experiment", "Run a full constellation experiment");
    experiment->add_option("--preset", exp.preset, "table1-analog | fig4-analog");
    experiment->add_option("--config", exp.config, "Config JSON")->check(CLI::ExistingFile);
    experiment->add_option("--seed", exp.seed, "Master seed (overrides the config)");
    experiment->add_option("--mode", exp.mode, "min-kl | multinomial");
    experiment->add_option("--domain", exp.domain, "error-only | full");
    experiment->add_option("--out", exp.out, "Output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*simulate) return run_simulate(sim, out);
        if (*fingerprint) return run_fingerprint(fpa, out);
        if (*authenticate) return run_authenticate(auth, out);
        if (*matrix) return run_matrix(mat, out);
        if (*experiment) return run_experiment_command(exp, out, err);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidArgument &e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NoErrorMass &e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace qnf::cli
