#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nlot/cli.hpp"
#include "nlot/mutations.hpp"
#include "nlot/nonlocality.hpp"
#include "nlot/optimality.hpp"
#include "nlot/verifier.hpp"
#include "nlot/version.hpp"

namespace py = pybind11;

namespace {

using nlot::Json;

/// The C++ side already serializes everything to canonical JSON; the Python
/// surface round-trips through text and hands back plain dicts/lists.
py::object to_py(const Json& j) {
  const py::object loads = py::module_::import("json").attr("loads");
  return loads(j.dump());
}

nlot::Primitive primitive_by_name(const std::string& name) {
  if (name == "ot") return nlot::ot();
  if (name == "to") return nlot::to();
  if (name == "ok") return nlot::ok();
  if (name == "ko") return nlot::ko();
  if (name == "pr") return nlot::pr();
  throw nlot::StructuralError("unknown primitive '" + name + "'");
}

py::object verify_by_name(const std::string& name, int workers) {
  nlot::VerifyOptions opts;
  opts.workers = workers;
  return to_py(nlot::verify(nlot::find_protocol(name), opts).to_json());
}

py::object verify_all(int workers) {
  nlot::VerifyOptions opts;
  opts.workers = workers;
  Json reports = Json::array();
  for (const nlot::ProtocolSpec& spec : nlot::catalog())
    reports.push_back(nlot::verify(spec, opts).to_json());
  return to_py(reports);
}

py::object run_world(const std::string& name, const std::string& tape_a,
                     const std::string& tape_b, const std::string& res_tape,
                     int in_a, int in_b) {
  const nlot::ProtocolSpec& spec = nlot::find_protocol(name);
  const auto bits = [](const std::string& s, int len, const char* what) {
    if (static_cast<int>(s.size()) != len)
      throw nlot::StructuralError(std::string(what) + " needs exactly " +
                                  std::to_string(len) + " bits");
    std::vector<std::uint8_t> out;
    for (const char c : s) out.push_back(static_cast<std::uint8_t>(c == '1'));
    return out;
  };
  nlot::World w;
  w.in_a = static_cast<std::uint8_t>(in_a);
  w.in_b = static_cast<std::uint8_t>(in_b);
  w.tape_a = bits(tape_a, spec.prog_a.tape_len, "tape_a");
  w.tape_b = bits(tape_b, spec.prog_b.tape_len, "tape_b");
  w.res_tape = bits(res_tape, spec.res_tape_bits(), "res_tape");
  return to_py(nlot::run_result_to_json(spec, w, nlot::run_protocol(spec, w)));
}

py::object search_preset_by_name(const std::string& name, int workers) {
  const nlot::search::SearchSpace space = nlot::search::preset(name);
  if (!space.witness_protocol.empty())
    return to_py(nlot::search::witness_membership(
        nlot::find_protocol(space.witness_protocol), space));
  return to_py(nlot::search::run_search(space, workers).to_json());
}

py::object search_reduction(const std::string& reduction, int bits,
                            bool one_way, int tape_a, int tape_b,
                            std::uint64_t witness_cap, int workers) {
  auto [target, resource] = nlot::search::parse_reduction(reduction);
  nlot::search::SearchSpace space;
  space.name = reduction;
  space.target = std::move(target);
  space.resource = std::move(resource);
  space.templates = nlot::search::all_templates(bits, one_way);
  space.tape_a = tape_a;
  space.tape_b = tape_b;
  space.witness_cap = witness_cap;
  return to_py(nlot::search::run_search(space, workers).to_json());
}

/// Same document as the `chsh` subcommand, routed through the CLI so the
/// two surfaces cannot drift apart.
py::object chsh_report(const std::string& behavior) {
  std::ostringstream out, err;
  const int code = nlot::run_cli({"chsh", behavior}, out, err);
  if (code != 0) throw nlot::StructuralError(err.str());
  const py::object loads = py::module_::import("json").attr("loads");
  return loads(out.str());
}

py::object cli_capture(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = nlot::run_cli(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact two-party reduction simulator and verifier";
  m.attr("__version__") = nlot::kVersion;

  m.def("catalog_names", [] { return nlot::catalog_names(); },
        "stable names of the eight reductions");
  m.def("primitive",
        [](const std::string& name) { return to_py(primitive_by_name(name).to_json()); },
        py::arg("name"), "behavior table of ot/to/ok/ko/pr");
  m.def("is_non_signaling",
        [](const std::string& name) { return nlot::is_non_signaling(primitive_by_name(name)); },
        py::arg("name"));
  m.def("verify", &verify_by_name, py::arg("protocol"), py::arg("workers") = 1,
        "full verification report for one catalog protocol");
  m.def("verify_all", &verify_all, py::arg("workers") = 1,
        "verification reports for the whole catalog");
  m.def("run", &run_world, py::arg("protocol"), py::arg("tape_a") = "",
        py::arg("tape_b") = "", py::arg("res_tape") = "", py::arg("in_a") = 0,
        py::arg("in_b") = 0, "single-world execution trace");
  m.def("search_preset", &search_preset_by_name, py::arg("name"),
        py::arg("workers") = 1, "run one of the named search spaces");
  m.def("search", &search_reduction, py::arg("reduction"), py::arg("bits") = 1,
        py::arg("one_way") = false, py::arg("tape_a") = 0, py::arg("tape_b") = 0,
        py::arg("witness_cap") = 0, py::arg("workers") = 1,
        "ad-hoc bounded search over <target>-from-<resource>");
  m.def("preset_names", [] { return nlot::search::preset_names(); });
  m.def("mutants", [] {
    Json out = Json::array();
    for (const nlot::Mutant& mu : nlot::mutation_catalog())
      out.push_back(Json{{"id", mu.id},
                         {"base", mu.base},
                         {"note", mu.note},
                         {"breaksCorrectness", mu.breaks_correctness},
                         {"breaksPrivacyA", mu.breaks_privacy_a},
                         {"breaksPrivacyB", mu.breaks_privacy_b}});
    return to_py(out);
  });
  m.def("chsh", &chsh_report, py::arg("behavior") = "singlet",
        "CHSH quantities for one behavior (same JSON as the chsh subcommand)");
  m.def("singlet_stats", [] {
    const nlot::EqualStatsReal s = nlot::singlet_stats(nlot::quarter_table_angles());
    return to_py(Json{{"p", Json::array({Json::array({s.p[0][0], s.p[0][1]}),
                                         Json::array({s.p[1][0], s.p[1][1]})})}});
  });
  m.def("cli", &cli_capture, py::arg("args"),
        "run the command line tool in-process; returns (exit, stdout, stderr)");
}
