#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "acw/audit.hpp"
#include "acw/cost_meter.hpp"
#include "acw/error.hpp"
#include "acw/harness.hpp"
#include "acw/serialization.hpp"

namespace py = pybind11;
using namespace acw;

namespace {

// Group elements, scalars, signatures and proofs cross the boundary as their
// canonical byte encodings; structured records as JSON text.

Bytes as_bytes(const py::bytes& b) {
    std::string_view s = b;
    return Bytes(s.begin(), s.end());
}

py::bytes to_py(const Bytes& b) { return py::bytes(reinterpret_cast<const char*>(b.data()), b.size()); }

std::unique_ptr<RandomSource> make_rng(std::optional<std::uint64_t> seed) {
    if (seed) return std::make_unique<SeededRandom>(*seed);
    return std::make_unique<SystemRandom>();
}

ars::Ring ring_from(const ars::PublicParams& pp, const std::vector<py::bytes>& members) {
    std::vector<GroupElement> pks;
    for (const auto& m : members) pks.push_back(pp.grp().decode(as_bytes(m)));
    return ars::Ring(std::move(pks));
}

py::tuple keypair(const Group& g, const GroupElement& pub, const Scalar& sec) {
    return py::make_tuple(to_py(g.encode(pub)), to_py(g.encode_scalar(sec)));
}

}  // namespace

PYBIND11_MODULE(_acwallet, m) {
    m.doc() = "Accountable ring signatures and a simulated contract-wallet chain";

    // AcwError(message) with a .code attribute holding the kebab-case error name
    static py::handle error_type = py::exception<Error>(m, "AcwError").release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("code") = std::string(errc_name(e.code()));
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    py::class_<ars::PublicParams>(m, "PublicParams")
        .def_property_readonly("group", [](const ars::PublicParams& pp) { return std::string(pp.grp().id()); })
        .def_property_readonly("element_size", [](const ars::PublicParams& pp) { return pp.grp().element_size(); })
        .def_property_readonly("scalar_size", [](const ars::PublicParams& pp) { return pp.grp().scalar_size(); })
        .def_property_readonly("order", [](const ars::PublicParams& pp) { return to_py(pp.grp().order()); })
        .def_property_readonly("generator", [](const ars::PublicParams& pp) {
            return to_py(pp.grp().encode(pp.grp().generator()));
        });

    m.def("setup", &ars::setup, py::arg("group") = "production");

    m.def("okgen", [](const ars::PublicParams& pp, std::optional<std::uint64_t> seed) {
        auto kp = ars::okgen(pp, *make_rng(seed));
        return keypair(pp.grp(), kp.opk, kp.osk);
    }, py::arg("pp"), py::arg("seed") = py::none(), "Returns (opk, osk).");

    m.def("ukgen", [](const ars::PublicParams& pp, std::optional<std::uint64_t> seed) {
        auto kp = ars::ukgen(pp, *make_rng(seed));
        return keypair(pp.grp(), kp.pk, kp.sk);
    }, py::arg("pp"), py::arg("seed") = py::none(), "Returns (pk, sk).");

    m.def("individual_keygen", [](const ars::PublicParams& pp, std::optional<std::uint64_t> seed) {
        auto kp = wallet::individual_keygen(pp.grp(), *make_rng(seed));
        return keypair(pp.grp(), kp.vk, kp.sigk);
    }, py::arg("pp"), py::arg("seed") = py::none(), "Returns (vk, sigk).");

    m.def("rsign", [](const ars::PublicParams& pp, const py::bytes& opk, const py::bytes& message,
                      const std::vector<py::bytes>& ring, const py::bytes& sk, std::optional<std::uint64_t> seed) {
        const Group& g = pp.grp();
        auto sig = ars::rsign(pp, g.decode(as_bytes(opk)), as_bytes(message), ring_from(pp, ring),
                              g.decode_scalar(as_bytes(sk)), *make_rng(seed));
        return to_py(ars::serialize(pp, sig));
    }, py::arg("pp"), py::arg("opk"), py::arg("message"), py::arg("ring"), py::arg("sk"), py::arg("seed") = py::none());

    m.def("rverify", [](const ars::PublicParams& pp, const py::bytes& opk, const py::bytes& message,
                        const std::vector<py::bytes>& ring, const py::bytes& sig) {
        try {
            return ars::rverify(pp, pp.grp().decode(as_bytes(opk)), as_bytes(message), ring_from(pp, ring),
                                ars::deserialize_signature(pp, as_bytes(sig)));
        } catch (const Error&) {
            return false;
        }
    }, py::arg("pp"), py::arg("opk"), py::arg("message"), py::arg("ring"), py::arg("sig"));

    m.def("rverify_cost", [](const ars::PublicParams& pp, const py::bytes& opk, const py::bytes& message,
                             const std::vector<py::bytes>& ring, const py::bytes& sig) {
        auto r = ring_from(pp, ring);
        auto s = ars::deserialize_signature(pp, as_bytes(sig));
        auto o = pp.grp().decode(as_bytes(opk));
        CostMeter meter;
        bool ok = false;
        {
            MeterScope scope(meter);
            ok = ars::rverify(pp, o, as_bytes(message), r, s);
        }
        return py::make_tuple(ok, meter.exponentiations, meter.hash_calls);
    }, "Returns (accepted, exponentiations, hash_calls).");

    m.def("open", [](const ars::PublicParams& pp, const py::bytes& message, const std::vector<py::bytes>& ring,
                     const py::bytes& sig, const py::bytes& osk, std::optional<std::uint64_t> seed) -> py::object {
        auto pi = ars::open(pp, as_bytes(message), ring_from(pp, ring), ars::deserialize_signature(pp, as_bytes(sig)),
                            pp.grp().decode_scalar(as_bytes(osk)), *make_rng(seed));
        if (!pi) return py::none();
        return to_py(ars::serialize(pp, *pi));
    }, py::arg("pp"), py::arg("message"), py::arg("ring"), py::arg("sig"), py::arg("osk"), py::arg("seed") = py::none(),
       "Opening proof bytes (identified key first), or None.");

    m.def("judge", [](const ars::PublicParams& pp, const py::bytes& opk, const py::bytes& message,
                      const std::vector<py::bytes>& ring, const py::bytes& sig, const py::bytes& pk,
                      const py::bytes& proof) {
        const Group& g = pp.grp();
        try {
            return ars::judge(pp, g.decode(as_bytes(opk)), as_bytes(message), ring_from(pp, ring),
                              ars::deserialize_signature(pp, as_bytes(sig)), g.decode(as_bytes(pk)),
                              ars::deserialize_proof(pp, as_bytes(proof)));
        } catch (const Error&) {
            return false;
        }
    }, py::arg("pp"), py::arg("opk"), py::arg("message"), py::arg("ring"), py::arg("sig"), py::arg("pk"),
       py::arg("proof"));

    m.def("proof_signer", [](const ars::PublicParams& pp, const py::bytes& proof) {
        return to_py(pp.grp().encode(ars::deserialize_proof(pp, as_bytes(proof)).pk_identified));
    });

    m.def("canonical_message", [](const std::string& request_json) {
        // the request fields only; any signatures in the document are ignored
        auto j = io::parse(request_json);
        auto pp = ars::setup("toy");
        j["ring_sigs"] = io::json::array();
        j["ind_sigs"] = io::json::array();
        return to_py(wallet::canonical_message(io::transaction_from_json(pp, j).first));
    });

    py::class_<wallet::Chain>(m, "Chain")
        .def(py::init([](const std::string& group, std::uint64_t chain_id) {
            return wallet::Chain(ars::setup(group), chain_id);
        }), py::arg("group") = "production", py::arg("chain_id") = 1)
        .def_static("from_json", [](const std::string& text) { return io::chain_from_json(io::parse(text)); })
        .def("to_json", [](const wallet::Chain& c) { return io::dump(io::chain_to_json(c)); })
        .def_property_readonly("params", &wallet::Chain::params)
        .def_property_readonly("chain_id", &wallet::Chain::chain_id)
        .def_property_readonly("log_size", [](const wallet::Chain& c) { return c.log().size(); })
        .def("deploy", [](wallet::Chain& c, const std::string& policy_json, const py::bytes& salt, const std::string& rule) {
            auto policy = io::policy_from_json(c.grp(), io::parse(policy_json));
            return wallet::address_hex(c.deploy_contract_wallet(std::move(policy), wallet::parse_action_rule(rule),
                                                                as_bytes(salt)));
        }, py::arg("policy_json"), py::arg("salt"), py::arg("rule") = "record", "Returns the wallet address (hex).")
        .def("nonce", [](const wallet::Chain& c, const std::string& addr) {
            return c.wallet(wallet::address_from_hex(addr)).nonce;
        })
        .def("balance", [](const wallet::Chain& c, const std::string& addr) {
            return c.balance(wallet::address_from_hex(addr));
        })
        .def("credit", [](wallet::Chain& c, const std::string& addr, std::uint64_t amount) {
            c.credit(wallet::address_from_hex(addr), amount);
        })
        .def("build_request", [](const wallet::Chain& c, const std::string& addr, const py::bytes& payload) {
            auto req = c.build_request(wallet::address_from_hex(addr), as_bytes(payload));
            return io::dump(io::transaction_to_json(c.params(), req, {}));
        }, "TransactionData JSON with no signatures.")
        .def("sign_ring", [](const wallet::Chain& c, const std::string& tx_json, std::size_t ring, const py::bytes& sk,
                             std::optional<std::uint64_t> seed) {
            auto [req, bundle] = io::transaction_from_json(c.params(), io::parse(tx_json));
            const auto& w = c.wallet(req.wallet);
            if (ring >= w.policy.rings.size()) throw Error(Errc::out_of_range, "policy has no such ring");
            const auto& pr = w.policy.rings[ring];
            bundle.ring_sigs.emplace_back(ring, ars::rsign(c.params(), pr.opk, wallet::canonical_message(req), pr.ring,
                                                           c.grp().decode_scalar(as_bytes(sk)), *make_rng(seed)));
            return io::dump(io::transaction_to_json(c.params(), req, bundle));
        }, py::arg("tx_json"), py::arg("ring"), py::arg("sk"), py::arg("seed") = py::none())
        .def("sign_individual", [](const wallet::Chain& c, const std::string& tx_json, std::size_t index,
                                   const py::bytes& sigk, std::optional<std::uint64_t> seed) {
            auto [req, bundle] = io::transaction_from_json(c.params(), io::parse(tx_json));
            bundle.ind_sigs.emplace_back(index, wallet::individual_sign(c.grp(), c.grp().decode_scalar(as_bytes(sigk)),
                                                                        wallet::canonical_message(req), *make_rng(seed)));
            return io::dump(io::transaction_to_json(c.params(), req, bundle));
        }, py::arg("tx_json"), py::arg("index"), py::arg("sigk"), py::arg("seed") = py::none())
        .def("submit", [](wallet::Chain& c, const std::string& tx_json) {
            auto [req, bundle] = io::transaction_from_json(c.params(), io::parse(tx_json));
            return io::dump(io::receipt_to_json(c.submit_transaction(req, bundle)));
        }, "Receipt JSON; raises AcwError on rejection.")
        .def("audit_open", [](const wallet::Chain& c, std::size_t tx, std::size_t ring, const py::bytes& osk,
                              std::optional<std::uint64_t> seed) -> py::object {
            auto claim = audit::open_transaction(c, tx, ring, c.grp().decode_scalar(as_bytes(osk)), *make_rng(seed));
            if (!claim) return py::none();
            return py::str(io::dump(io::claim_to_json(c.params(), *claim)));
        }, py::arg("tx"), py::arg("ring"), py::arg("osk"), py::arg("seed") = py::none())
        .def("audit_judge", [](const wallet::Chain& c, const std::string& claim_json) {
            try {
                return audit::judge_transaction(c, io::claim_from_json(c.params(), io::parse(claim_json)));
            } catch (const Error&) {
                return false;
            }
        });

    m.def("run_suite", [](const std::string& name, const std::string& group, std::size_t trials, std::uint64_t seed) {
        return io::dump(harness::to_json(harness::run_suite(name, ars::setup(group), trials, seed)));
    }, py::arg("name"), py::arg("group") = "toy", py::arg("trials") = 100, py::arg("seed") = 1,
       "Game report JSON.");

    m.def("run_bench", [](const std::string& group, std::vector<std::size_t> sizes, std::size_t runs,
                          std::uint64_t seed) {
        return io::dump(harness::to_json(harness::run_bench(ars::setup(group), sizes, runs, seed)));
    }, py::arg("group") = "production", py::arg("sizes") = std::vector<std::size_t>{4, 10}, py::arg("runs") = 100,
       py::arg("seed") = 1, "Benchmark report JSON.");
}
