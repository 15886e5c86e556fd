#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lwgas/attacks.hpp"
#include "lwgas/cost_model.hpp"
#include "lwgas/gas.hpp"
#include "lwgas/harn.hpp"
#include "lwgas/sim.hpp"

namespace py = pybind11;
using namespace lwgas;

namespace {

py::int_ to_py(const BigInt& v) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(to_decimal(v).c_str(), nullptr, 10));
}

BigInt from_py(const py::int_& v) { return parse_integer(py::str(v).cast<std::string>()); }

py::object point_to_py(const CurvePoint& p) {
  if (p.is_infinity()) return py::none();
  return py::make_tuple(to_py(p.x().residue()), to_py(p.y().residue()));
}

struct Group {
  GroupConfig config;
  std::vector<Share> shares;
};

std::vector<PublicShare> publics_for(const Group& g, std::span<const Share> shares) {
  std::vector<PublicShare> out;
  for (const auto& s : shares) out.push_back(make_public_share(s, g.config));
  return out;
}

std::vector<Share> select(const Group& g, const std::vector<std::string>& ids) {
  if (ids.empty()) return g.shares;
  std::vector<Share> out;
  for (const auto& id : ids) {
    auto it = std::find_if(g.shares.begin(), g.shares.end(),
                           [&](const Share& s) { return s.member_id == id; });
    if (it == g.shares.end()) throw Error(ErrorKind::kUnknownMember, "unknown member '" + id + "'");
    out.push_back(*it);
  }
  return out;
}

// Confirmation plus key agreement among `ids`; returns the agreed key or None.
py::object agree(const Group& g, const std::vector<std::string>& ids, std::uint64_t seed) {
  Rng rng(seed);
  auto shares = select(g, ids);
  std::vector<MemberState> members;
  for (const auto& s : shares) members.push_back(make_member_state(s, g.config));
  auto publics = publics_for(g, shares);
  std::vector<EncryptedShare> traffic;
  for (auto& m : members) {
    for (const auto& p : publics)
      if (p.member_id != m.share.member_id) m.received_public_shares.insert_or_assign(p.member_id, p);
    derive_pairwise_keys(m);
  }
  for (const auto& m : members) {
    auto out = seal_share_for_peers(m, rng);
    traffic.insert(traffic.end(), out.begin(), out.end());
  }
  std::optional<FieldElement> key;
  for (auto& m : members) {
    auto r = key_agreement_round(m, traffic);
    if (!r.ok()) return py::none();
    if (key && !(*key == *r.group_key)) return py::none();
    key = r.group_key;
  }
  return key ? py::object(to_py(key->residue())) : py::none();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lightweight group authentication: protocol, cost model, simulator, attacks";

  py::register_exception<Error>(m, "LwgasError", PyExc_ValueError);

  // cost model
  m.def(
      "per_user_cost",
      [](const std::string& scheme, std::uint64_t members, const std::string& slope) {
        return cost::per_user_cost(cost::parse_scheme(scheme), members, cost::parse_harn_slope(slope));
      },
      py::arg("scheme"), py::arg("m"), py::arg("harn_slope") = "text");
  m.def(
      "savings_ratio",
      [](std::uint64_t members) {
        auto f = cost::savings_ratio(members);
        return py::module_::import("fractions").attr("Fraction")(f.num, f.den);
      },
      py::arg("m"));

  // curves
  py::class_<CurveParams>(m, "Curve")
      .def_property_readonly("name", &CurveParams::name)
      .def_property_readonly("p", [](const CurveParams& c) { return to_py(c.modulus().value()); })
      .def_property_readonly("order", [](const CurveParams& c) { return to_py(c.order()); })
      .def_property_readonly("scalar_order",
                             [](const CurveParams& c) { return to_py(c.scalar_order()); })
      .def_property_readonly("generator",
                             [](const CurveParams& c) { return point_to_py(c.generator()); })
      .def_property_readonly("protocol_generator",
                             [](const CurveParams& c) { return point_to_py(c.protocol_generator()); })
      .def("scalar_mul",
           [](const CurveParams& c, const py::int_& k) {
             return point_to_py(scalar_mul(from_py(k), c.protocol_generator(), c));
           })
      .def("to_json", &curve_to_json)
      .def("__repr__", [](const CurveParams& c) { return "<Curve " + c.name() + ">"; });
  m.def("load_curve", [](const std::string& ref) { return load_curve(ref); }, py::arg("ref"));

  // protocol
  py::class_<Group>(m, "Group")
      .def_property_readonly("threshold", [](const Group& g) { return g.config.threshold; })
      .def_property_readonly("member_ids",
                             [](const Group& g) {
                               std::vector<std::string> ids;
                               for (const auto& e : g.config.roster) ids.push_back(e.member_id);
                               return ids;
                             })
      .def_property_readonly("Q", [](const Group& g) { return point_to_py(g.config.Q); })
      .def_property_readonly("curve", [](const Group& g) { return g.config.curve; })
      .def("config_json", [](const Group& g) { return g.config.to_json(); })
      .def("share", [](const Group& g, const std::string& id) {
        auto s = select(g, {id}).front();
        return py::make_tuple(to_py(s.x.residue()), to_py(s.y.residue()));
      })
      .def("public_share", [](const Group& g, const std::string& id) {
        auto s = select(g, {id});
        return point_to_py(make_public_share(s.front(), g.config).point);
      })
      .def(
          "gm_verify",
          [](const Group& g, const std::vector<std::string>& ids) {
            auto shares = select(g, ids);
            auto v = gm_verify(g.config, g.shares, publics_for(g, shares));
            py::dict out;
            for (const auto& mv : v.verdicts) out[py::str(mv.member_id)] = mv.valid;
            return out;
          },
          py::arg("members") = std::vector<std::string>{})
      .def(
          "decentralized_verify",
          [](const Group& g, const std::vector<std::string>& ids) {
            auto shares = select(g, ids);
            return decentralized_verify(g.config, publics_for(g, shares), shares.size());
          },
          py::arg("members") = std::vector<std::string>{})
      .def("key_agreement", &agree, py::arg("members") = std::vector<std::string>{},
           py::arg("seed") = 1)
      .def(
          "verify_secret",
          [](const Group& g, const py::int_& s) {
            return verify_commitment(FieldElement(from_py(s), g.config.share_field()),
                                     g.config.commitment);
          },
          py::arg("secret"));
  m.def(
      "gm_init",
      [](std::size_t t, std::size_t n, const std::string& curve_ref, std::uint64_t seed) {
        Rng rng(seed);
        InitOptions opts;
        opts.curve_ref = curve_ref;
        auto init = gm_init(t, n, load_curve(curve_ref), rng, opts);
        return Group{std::move(init.config), std::move(init.shares)};
      },
      py::arg("t"), py::arg("n"), py::arg("curve") = "builtin:test2017", py::arg("seed") = 1);

  m.def(
      "harn_check",
      [](std::size_t t, std::size_t n, std::size_t members, const std::string& which,
         std::uint64_t seed) {
        Rng rng(seed);
        auto group = which == "tiny" ? harn::tiny_group() : harn::fixture_group();
        auto setup = harn::harn_init(t, n, group, rng);
        std::vector<FieldElement> xs;
        for (std::size_t i = 0; i < members; ++i) xs.push_back(setup.tokens.at(i).x);
        std::vector<harn::Release> rel;
        for (std::size_t i = 0; i < members; ++i)
          rel.push_back(harn::harn_release(setup.tokens[i], xs, setup.params));
        return harn::harn_verify(rel, setup.params);
      },
      py::arg("t"), py::arg("n"), py::arg("m"), py::arg("group") = "tiny", py::arg("seed") = 1);

  // simulator: scenarios and reports cross the boundary as JSON text
  m.def(
      "simulate_json",
      [](const std::string& scenario, bool events) {
        auto s = sim::Scenario::from_json(scenario);
        sim::SimReport r;
        {
          py::gil_scoped_release nogil;
          r = sim::run(s);
        }
        return r.to_json(events);
      },
      py::arg("scenario"), py::arg("events") = false);
  m.def(
      "sweep_csv",
      [](const std::vector<std::string>& schemes, const std::vector<std::size_t>& ms,
         const std::string& base, unsigned jobs) {
        std::vector<sim::Scheme> parsed;
        for (const auto& s : schemes) parsed.push_back(sim::parse_scheme(s));
        auto b = sim::Scenario::from_json(base);
        std::vector<sim::SimReport> rs;
        {
          py::gil_scoped_release nogil;
          rs = sim::sweep(parsed, ms, b, jobs);
        }
        std::ostringstream out;
        sim::write_csv(out, rs);
        return out.str();
      },
      py::arg("schemes"), py::arg("ms"), py::arg("base") = "{}", py::arg("jobs") = 1);
  m.def("preset_json", [](const std::string& name) {
    std::vector<std::string> out;
    for (const auto& s : sim::preset(name)) out.push_back(s.to_json());
    return out;
  });

  // attacks
  m.def("attack_names", &attacks::scenario_names);
  m.def(
      "attack_json",
      [](const std::string& name, std::uint64_t seed) {
        return attacks::run_by_name(name, seed).to_json();
      },
      py::arg("name"), py::arg("seed") = 1);

  m.attr("CALIBRATED_COMPUTE_RATE") = sim::kCalibratedComputeRate;
  m.attr("CALIBRATED_JOULES_PER_TMULQ") = sim::kCalibratedJoulesPerTmulq;
}
