#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "erl/channel.hpp"
#include "erl/io.hpp"
#include "erl/measurement.hpp"
#include "erl/protocols.hpp"
#include "erl/report.hpp"
#include "erl/sampler.hpp"
#include "erl/state.hpp"
#include "erl/wigner.hpp"

namespace py = pybind11;
using namespace erl;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Twin-engine Gaussian phase-space simulator core";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_RuntimeError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    // symplectic core
    m.def("build_sigma", &build_sigma, py::arg("modes"));
    m.def("is_symplectic", &is_symplectic, py::arg("matrix"), py::arg("tol") = 1e-10);
    m.def("poisson_bracket_linear", &poisson_bracket_linear, py::arg("u"), py::arg("v"));
    m.def("schur_complement", &schur_complement, py::arg("matrix"), py::arg("k"));

    py::class_<SymplecticMap>(m, "SymplecticMap")
        .def(py::init<Eigen::MatrixXd, double>(), py::arg("matrix"), py::arg("tol") = 1e-10)
        .def_readonly("matrix", &SymplecticMap::matrix)
        .def_readonly("modes", &SymplecticMap::modes);
    m.def("make_rotation", &make_rotation, py::arg("theta"), py::arg("mode"), py::arg("modes"));
    m.def("make_squeeze", &make_squeeze, py::arg("r"), py::arg("mode"), py::arg("modes"));
    m.def("make_beamsplitter", &make_beamsplitter, py::arg("theta"), py::arg("mode_a"),
          py::arg("mode_b"), py::arg("modes"));
    m.def("make_qp_coupling", &make_qp_coupling, py::arg("chi_t"), py::arg("mode_a"),
          py::arg("mode_b"), py::arg("modes"));
    m.def("random_symplectic", &random_symplectic, py::arg("modes"), py::arg("seed"));

    // states
    py::class_<ValidityReport>(m, "ValidityReport")
        .def_readonly("cup_satisfied", &ValidityReport::cup_satisfied)
        .def_readonly("min_eigenvalue", &ValidityReport::min_eigenvalue)
        .def_readonly("saturating", &ValidityReport::saturating)
        .def_readonly("max_ent_satisfied", &ValidityReport::max_ent_satisfied)
        .def("__repr__", [](const ValidityReport& r) {
            return "<ValidityReport cup=" + std::string(r.cup_satisfied ? "True" : "False") +
                   " min_eig=" + format_number(r.min_eigenvalue) + ">";
        });

    py::class_<GaussianState>(m, "GaussianState")
        .def(py::init<double, Eigen::VectorXd, Eigen::MatrixXd, double>(), py::arg("lambda_"),
             py::arg("means"), py::arg("moments"), py::arg("symmetry_tol") = 1e-10)
        .def_property_readonly("modes", &GaussianState::modes)
        .def_property_readonly("lambda_", &GaussianState::lambda)
        .def_property_readonly("means", &GaussianState::means)
        .def_property_readonly("moments", &GaussianState::moments)
        .def_property_readonly("gamma", &GaussianState::gamma);

    m.def("validate", &validate, py::arg("state"), py::arg("tol") = 1e-9);
    m.def("density_at", &density_at, py::arg("state"), py::arg("z"));
    m.def("entropy", &entropy, py::arg("state"));
    m.def("tensor", &tensor, py::arg("a"), py::arg("b"));
    m.def("marginal", &marginal, py::arg("state"), py::arg("modes"));
    m.def("transform",
          py::overload_cast<const GaussianState&, const SymplecticMap&, const PhaseVector&>(
              &transform),
          py::arg("state"), py::arg("map"), py::arg("displacement"));
    m.def("transform", py::overload_cast<const GaussianState&, const SymplecticMap&>(&transform),
          py::arg("state"), py::arg("map"));
    m.def("vacuum_state", &vacuum_state, py::arg("modes"), py::arg("lambda_"));
    m.def("quadrature_state", &quadrature_state, py::arg("theta"), py::arg("a"), py::arg("r"),
          py::arg("lambda_"));
    m.def("epr_state", &epr_state, py::arg("r"), py::arg("lambda_"));
    m.def(
        "bhattacharyya_fidelity",
        [](const GaussianState& a, const GaussianState& b) {
            return bhattacharyya_fidelity(a, b);
        },
        py::arg("a"), py::arg("b"));
    m.def("random_valid_state", &random_valid_state, py::arg("modes"), py::arg("seed"),
          py::arg("lambda_") = 1.0, py::arg("max_squeeze") = 1.2, py::arg("saturating") = false);

    py::class_<GaussianMixture>(m, "GaussianMixture")
        .def(py::init<std::vector<double>, std::vector<GaussianState>, double>(),
             py::arg("weights"), py::arg("components"), py::arg("weight_tol") = 1e-12)
        .def_property_readonly("weights", &GaussianMixture::weights)
        .def_property_readonly("components", &GaussianMixture::components);
    m.def("mixture_moments", &mixture_moments, py::arg("mixture"));
    m.def("mixture_validate", &mixture_validate, py::arg("mixture"), py::arg("tol") = 1e-9);

    // measurements
    py::class_<GaussianIndicator>(m, "GaussianIndicator")
        .def(py::init<std::vector<int>, Eigen::MatrixXd, Eigen::VectorXd, Eigen::MatrixXd,
                      double>(),
             py::arg("target_modes"), py::arg("outcome_map"), py::arg("base_mean"),
             py::arg("moments"), py::arg("weight") = 1.0)
        .def_readonly("target_modes", &GaussianIndicator::target_modes)
        .def_readonly("moments", &GaussianIndicator::moments)
        .def_readonly("weight", &GaussianIndicator::weight);
    m.def("heterodyne_indicator", &heterodyne_indicator, py::arg("mode"), py::arg("lambda_"));
    m.def("quadrature_indicator", &quadrature_indicator, py::arg("mode"), py::arg("theta"),
          py::arg("r"), py::arg("lambda_"));
    m.def("correlated_indicator", &correlated_indicator, py::arg("mode_a"), py::arg("mode_b"),
          py::arg("r"), py::arg("lambda_"));
    m.def("indicator_valid", &indicator_valid, py::arg("indicator"), py::arg("lambda_"),
          py::arg("tol") = 1e-9);
    m.def("outcome_density", &outcome_density, py::arg("state"), py::arg("indicator"),
          py::arg("y"));

    py::class_<MeasurementRecord>(m, "MeasurementRecord")
        .def_readonly("outcome", &MeasurementRecord::outcome)
        .def_readonly("likelihood", &MeasurementRecord::likelihood)
        .def_readonly("posterior", &MeasurementRecord::posterior);
    m.def("condition", &condition, py::arg("state"), py::arg("indicator"), py::arg("y"));

    py::class_<MixtureMeasurementRecord>(m, "MixtureMeasurementRecord")
        .def_readonly("outcome", &MixtureMeasurementRecord::outcome)
        .def_readonly("likelihood", &MixtureMeasurementRecord::likelihood)
        .def_readonly("posterior", &MixtureMeasurementRecord::posterior);
    m.def("mixture_condition", &mixture_condition, py::arg("mixture"), py::arg("indicator"),
          py::arg("y"));
    m.def("collapse_rule", &collapse_rule, py::arg("state"), py::arg("theta"), py::arg("y"),
          py::arg("conjugate_variance_cap"), py::arg("resolution_variance"));

    // channels
    py::class_<GaussianChannel>(m, "GaussianChannel")
        .def(py::init<Eigen::MatrixXd, Eigen::MatrixXd, Eigen::VectorXd, double>(), py::arg("x"),
             py::arg("noise"), py::arg("delta"), py::arg("lambda_"))
        .def_readonly("x", &GaussianChannel::x)
        .def_readonly("noise", &GaussianChannel::noise)
        .def_readonly("delta", &GaussianChannel::delta)
        .def_readonly("lambda_", &GaussianChannel::lambda)
        .def_property_readonly("y_view", &GaussianChannel::y_view);
    m.def("apply", &apply, py::arg("channel"), py::arg("state"));
    m.def("channel_valid", &channel_valid, py::arg("channel"), py::arg("tol") = 1e-9);
    m.def("identity_channel", &identity_channel, py::arg("modes"), py::arg("lambda_"));
    m.def("attenuation_channel", &attenuation_channel, py::arg("eta"), py::arg("modes"),
          py::arg("lambda_"));
    m.def("dilation_induced_channel", &dilation_induced_channel, py::arg("joint"),
          py::arg("system_modes"), py::arg("env"));
    m.def("choi_state", &choi_state, py::arg("channel"), py::arg("r"));
    m.def("channel_from_choi", &channel_from_choi, py::arg("choi"), py::arg("r"));
    m.def("compose", &compose, py::arg("second"), py::arg("first"));
    m.def("random_valid_channel", &random_valid_channel, py::arg("modes"), py::arg("seed"),
          py::arg("lambda_") = 1.0);

    // sampler
    py::class_<OnticSampleSet>(m, "OnticSampleSet")
        .def_readonly("points", &OnticSampleSet::points)
        .def_readonly("seed", &OnticSampleSet::seed)
        .def_readonly("source", &OnticSampleSet::source)
        .def_property_readonly("count", &OnticSampleSet::count);
    py::class_<SampleStats>(m, "SampleStats")
        .def_readonly("mean", &SampleStats::mean)
        .def_readonly("moments", &SampleStats::moments)
        .def_readonly("count", &SampleStats::count)
        .def_readonly("mean_std_error", &SampleStats::mean_std_error)
        .def_readonly("moments_std_error", &SampleStats::moments_std_error);
    m.def("sample_states",
          py::overload_cast<const GaussianState&, int, std::uint64_t>(&sample_states),
          py::arg("state"), py::arg("count"), py::arg("seed"));
    m.def("sample_states",
          py::overload_cast<const GaussianMixture&, int, std::uint64_t>(&sample_states),
          py::arg("mixture"), py::arg("count"), py::arg("seed"));
    m.def("push_symplectic",
          py::overload_cast<const OnticSampleSet&, const SymplecticMap&>(&push_symplectic),
          py::arg("set"), py::arg("map"));
    m.def("push_channel", &push_channel, py::arg("set"), py::arg("channel"), py::arg("seed"));
    m.def("simulate_measurement", &simulate_measurement, py::arg("set"), py::arg("indicator"),
          py::arg("seed"));
    m.def("empirical_moments", &empirical_moments, py::arg("set"));

    // quantum dictionary
    py::class_<QuantumGaussianSpec>(m, "QuantumGaussianSpec")
        .def(py::init<double, Eigen::VectorXd, Eigen::MatrixXd>(), py::arg("hbar"),
             py::arg("means"), py::arg("gamma"))
        .def_readonly("hbar", &QuantumGaussianSpec::hbar)
        .def_readonly("means", &QuantumGaussianSpec::means)
        .def_readonly("gamma", &QuantumGaussianSpec::gamma);
    m.def("wigner_state", &wigner_state, py::arg("spec"), py::arg("tol") = 1e-9);
    m.def("quantum_spec", &quantum_spec, py::arg("state"));
    m.def("born_overlap", &born_overlap, py::arg("state"), py::arg("povm_element"),
          py::arg("povm_weight") = 1.0);
    m.def("purity", &purity, py::arg("spec"));

    // io
    m.def("load_state_json", &load_state_json, py::arg("text"));
    m.def("save_state_json", &save_state_json, py::arg("state"));
    m.def("load_channel_json", &load_channel_json, py::arg("text"));
    m.def("save_channel_json", &save_channel_json, py::arg("channel"));

    // scenarios: report returned as a JSON string, decoded on the python side
    m.def("scenario_names", &scenario_names);
    m.def(
        "run_scenario_json",
        [](const std::string& name, double lambda, double r, double theta, int sample_count,
           std::uint64_t seed, double conjugate_cap, double chi_t, double probe_r, int trials,
           double q0, double p0, double dq, double dp, double dq_ind, double dp_ind,
           double deviation_tol, bool corrupt) {
            ScenarioOptions opt;
            opt.lambda = lambda;
            opt.r = r;
            opt.theta = theta;
            opt.sample_count = sample_count;
            opt.seed = seed;
            opt.conjugate_cap = conjugate_cap;
            opt.chi_t = chi_t;
            opt.probe_r = probe_r;
            opt.trials = trials;
            opt.q0 = q0;
            opt.p0 = p0;
            opt.dq = dq;
            opt.dp = dp;
            opt.dq_ind = dq_ind;
            opt.dp_ind = dp_ind;
            opt.deviation_tol = deviation_tol;
            opt.corrupt = corrupt;
            return to_json(run_scenario(name, opt));
        },
        py::arg("name"), py::arg("lambda_") = 1.0, py::arg("r") = 8.0, py::arg("theta") = 0.0,
        py::arg("N") = 100000, py::arg("seed") = 1, py::arg("cap") = 1e6,
        py::arg("chi_t") = 1.0, py::arg("probe_r") = 6.0, py::arg("trials") = 500,
        py::arg("q0") = 100.0, py::arg("p0") = 100.0, py::arg("dq") = 0.01,
        py::arg("dp") = 0.01, py::arg("dq_ind") = 1.0, py::arg("dp_ind") = 1.0,
        py::arg("deviation_tol") = 1e-3, py::arg("corrupt") = false);
    m.def(
        "run_equivalence_json",
        [](int sample_count, const std::vector<std::uint64_t>& seeds, double threshold,
           bool negative_control, const std::vector<std::string>& only) {
            const EquivalenceSummary summary =
                run_equivalence_suite(sample_count, seeds, threshold, negative_control, only);
            std::string body = "[";
            for (std::size_t i = 0; i < summary.reports.size(); ++i)
                body += to_json(summary.reports[i]) +
                        (i + 1 < summary.reports.size() ? "," : "");
            body += "]";
            return body;
        },
        py::arg("N") = 100000, py::arg("seeds") = std::vector<std::uint64_t>{1, 2, 3},
        py::arg("threshold") = 4.0, py::arg("negative_control") = false,
        py::arg("only") = std::vector<std::string>{});
}
