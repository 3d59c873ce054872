#include "fairrl/envs.hpp"
#include "fairrl/harness.hpp"
#include "fairrl/mdp.hpp"
#include "fairrl/objectives.hpp"
#include "fairrl/occupancy_solver.hpp"
#include "fairrl/posterior.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace fairrl;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fairness-aware multi-agent RL: occupancy solver, posterior "
              "sampling, objectives, environments";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
    py::register_exception<NonErgodicChain>(m, "NonErgodicChain", PyExc_RuntimeError);
    py::register_exception<InfeasibleProjection>(m, "InfeasibleProjection",
                                                 PyExc_RuntimeError);

    py::class_<TabularMdp>(m, "TabularMdp")
        .def(py::init([](int s, int a, int k, double gamma,
                         std::vector<std::vector<Vec>> transition,
                         std::vector<std::vector<Vec>> rewards, Vec initial_dist) {
                 // Nested rows mirror the JSON layout: transition[s][a][s'],
                 // rewards[k][s][a].
                 Vec flat_p;
                 for (const auto& rows : transition)
                     for (const auto& row : rows)
                         flat_p.insert(flat_p.end(), row.begin(), row.end());
                 std::vector<Vec> flat_r;
                 for (const auto& table : rewards) {
                     Vec flat;
                     for (const auto& row : table)
                         flat.insert(flat.end(), row.begin(), row.end());
                     flat_r.push_back(std::move(flat));
                 }
                 return TabularMdp(s, a, k, gamma, std::move(flat_p),
                                   std::move(flat_r), std::move(initial_dist));
             }),
             py::arg("n_states"), py::arg("n_actions"), py::arg("n_agents"),
             py::arg("gamma"), py::arg("transition"), py::arg("rewards"),
             py::arg("initial_dist"))
        .def_static("from_json", &TabularMdp::from_json)
        .def("to_json", &TabularMdp::to_json)
        .def_property_readonly("n_states", &TabularMdp::n_states)
        .def_property_readonly("n_actions", &TabularMdp::n_actions)
        .def_property_readonly("n_agents", &TabularMdp::n_agents)
        .def("p", &TabularMdp::p)
        .def("reward", &TabularMdp::reward);

    py::class_<TabularPolicy>(m, "TabularPolicy")
        .def(py::init<int, int, Vec>(), py::arg("n_states"), py::arg("n_actions"),
             py::arg("probs"))
        .def_static("uniform", &TabularPolicy::uniform)
        .def("prob", &TabularPolicy::prob)
        .def_property_readonly("probs", &TabularPolicy::probs);

    py::class_<OccupancyMeasure>(m, "OccupancyMeasure")
        .def_readonly("n_states", &OccupancyMeasure::n_states)
        .def_readonly("n_actions", &OccupancyMeasure::n_actions)
        .def_readonly("d", &OccupancyMeasure::d)
        .def("at", &OccupancyMeasure::at)
        .def("state_marginals", &OccupancyMeasure::state_marginals);

    py::class_<PolicyEvaluation>(m, "PolicyEvaluation")
        .def_readonly("steady_state_dist", &PolicyEvaluation::steady_state_dist)
        .def_readonly("occupancy", &PolicyEvaluation::occupancy)
        .def_readonly("avg_rewards", &PolicyEvaluation::avg_rewards);

    m.def("steady_state", &steady_state, py::arg("mdp"), py::arg("policy"),
          py::arg("tolerance") = 1e-12, py::arg("max_iters") = 1000000L);
    m.def("pareto_dominates", &pareto_dominates, py::arg("a"), py::arg("b"),
          py::arg("strict_tol") = 1e-12);
    m.def("verify_pareto_front", &verify_pareto_front);

    py::class_<ObjectiveFunction>(m, "ObjectiveFunction")
        .def_static("alpha_fair", &ObjectiveFunction::alpha_fair)
        .def_static("proportional_fair", &ObjectiveFunction::proportional_fair)
        .def_static("weighted_proportional_fair",
                    &ObjectiveFunction::weighted_proportional_fair)
        .def_static("max_min", &ObjectiveFunction::max_min)
        .def_static("neg_variance", &ObjectiveFunction::neg_variance)
        .def_static("identity", &ObjectiveFunction::identity)
        .def("evaluate", &ObjectiveFunction::evaluate)
        .def("gradient", &ObjectiveFunction::gradient)
        .def_readwrite("epsilon_floor", &ObjectiveFunction::epsilon_floor);

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("step_size", &SolverConfig::step_size)
        .def_readwrite("max_iters", &SolverConfig::max_iters)
        .def_readwrite("tolerance", &SolverConfig::tolerance)
        .def_readwrite("projection_tolerance", &SolverConfig::projection_tolerance)
        .def_readwrite("projection_max_iters", &SolverConfig::projection_max_iters);

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("occupancy", &SolveResult::occupancy)
        .def_readonly("objective", &SolveResult::objective)
        .def_readonly("avg_rewards", &SolveResult::avg_rewards)
        .def_readonly("converged", &SolveResult::converged)
        .def_readonly("iterations", &SolveResult::iterations);

    m.def("solve_occupancy", &solve_occupancy, py::arg("mdp"), py::arg("objective"),
          py::arg("config") = SolverConfig{});
    m.def("project_feasible", &project_feasible, py::arg("raw"), py::arg("mdp"),
          py::arg("config") = SolverConfig{});
    m.def("extract_policy", &extract_policy, py::arg("occupancy"),
          py::arg("marginal_floor") = 1e-12);

    py::class_<DirichletPosterior>(m, "DirichletPosterior")
        .def(py::init<int, int, int, double>(), py::arg("n_states"), py::arg("n_actions"),
             py::arg("n_agents"), py::arg("omega") = 1.0)
        .def("record", &DirichletPosterior::record)
        .def("count", &DirichletPosterior::count)
        .def("count_total", &DirichletPosterior::count_total)
        .def("visits", &DirichletPosterior::visits)
        .def("reward_estimate", &DirichletPosterior::reward_estimate);

    m.def("sample_kernel", &sample_kernel, py::arg("posterior"), py::arg("seed"));

    m.def(
        "run_model_based_mdp",
        [](const TabularMdp& mdp, const ObjectiveFunction& f, int tau, long total_steps,
           std::uint64_t seed) {
            TabularMdpEnv env(mdp);
            return run_model_based(env, f, EpochSchedule::fixed(tau), SolverConfig{},
                                   total_steps, seed)
                .policy;
        },
        py::arg("mdp"), py::arg("objective"), py::arg("tau"), py::arg("total_steps"),
        py::arg("seed"));

    m.def("qoe", &qoe, py::arg("wait"));
    m.def("running_fairness", &running_fairness, py::arg("objective"),
          py::arg("reward_history"), py::arg("t"));
}
