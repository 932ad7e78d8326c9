// acw: file-based front end for the accountable contract wallet simulator.
//
// State lives in <workspace>/chain.json (workspace from --workspace, else
// $ACW_WORKSPACE, else the current directory). Keys, policies, requests,
// bundles and claims are JSON files passed between the parties.

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "acw/audit.hpp"
#include "acw/error.hpp"
#include "acw/harness.hpp"
#include "acw/serialization.hpp"

namespace fs = std::filesystem;
using namespace acw;
using io::json;

namespace {

constexpr int kExitJudgeReject = 1;
constexpr int kExitUsage = 2;

int exit_code(Errc c) {
    switch (c) {
        case Errc::io_error: return 3;
        case Errc::invalid_argument: return 4;
        case Errc::unknown_group: return 5;
        case Errc::malformed_encoding: return 6;
        case Errc::not_in_subgroup: return 7;
        case Errc::empty_ring: return 8;
        case Errc::duplicate_ring_members: return 9;
        case Errc::signer_not_in_ring: return 10;
        case Errc::empty_policy: return 11;
        case Errc::overlapping_rings: return 12;
        case Errc::duplicate_individuals: return 13;
        case Errc::invalid_policy: return 14;
        case Errc::address_collision: return 15;
        case Errc::unknown_wallet: return 20;
        case Errc::bad_nonce: return 21;
        case Errc::missing_signature: return 22;
        case Errc::extra_signature: return 23;
        case Errc::invalid_ring_signature: return 24;
        case Errc::invalid_individual_signature: return 25;
        case Errc::insufficient_balance: return 26;
        case Errc::out_of_range: return 30;
        case Errc::untraceable: return 31;
    }
    return 99;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const fs::path& p) { return io::parse(read_file(p)); }

// write to a sibling temp file, then rename over the target
void write_file(const fs::path& p, const std::string& text) {
    fs::path tmp = p;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::io_error, "cannot write " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw Error(Errc::io_error, "short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, p, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error(Errc::io_error, "cannot replace " + p.string() + ": " + ec.message());
    }
}

void emit(const std::string& out_path, const json& j) {
    if (out_path.empty() || out_path == "-") {
        std::cout << io::dump(j);
    } else {
        write_file(out_path, io::dump(j));
    }
}

class Workspace {
public:
    explicit Workspace(std::string dir) : dir_(dir.empty() ? fs::path(".") : fs::path(dir)) {}

    fs::path chain_path() const { return dir_ / "chain.json"; }
    bool has_chain() const { return fs::exists(chain_path()); }

    wallet::Chain load() const {
        if (!has_chain()) throw Error(Errc::io_error, "no chain state at " + chain_path().string() + " (run 'chain init')");
        return io::chain_from_json(read_json(chain_path()));
    }
    void save(const wallet::Chain& chain) const { write_file(chain_path(), io::dump(io::chain_to_json(chain))); }

    // Exclusive lock held for the lifetime of the returned object.
    class Lock {
    public:
        explicit Lock(const fs::path& p) {
            fd_ = ::open(p.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
            if (fd_ < 0 || ::flock(fd_, LOCK_EX) != 0) throw Error(Errc::io_error, "cannot lock " + p.string());
        }
        ~Lock() {
            if (fd_ >= 0) ::close(fd_);
        }
        Lock(const Lock&) = delete;
        Lock& operator=(const Lock&) = delete;

    private:
        int fd_ = -1;
    };

    Lock lock() const {
        fs::create_directories(dir_);
        return Lock(dir_ / "chain.json.lock");
    }

private:
    fs::path dir_;
};

// Key files: {"group", "kind", <public name>: hex, <secret name>: hex}
struct KeyNames {
    const char* pub;
    const char* sec;
};

KeyNames key_names(std::string_view kind) {
    if (kind == "user") return {"pk", "sk"};
    if (kind == "opener") return {"opk", "osk"};
    if (kind == "individual") return {"vk", "sigk"};
    throw Error(Errc::invalid_argument, "key kind must be user, opener or individual");
}

struct KeyFile {
    std::string group;
    std::string kind;
    GroupElement pub;
    std::optional<Scalar> sec;
};

KeyFile read_key(const std::string& path, const Group& grp, std::string_view want_kind = {}) {
    json j = read_json(path);
    if (!j.is_object() || !j.contains("group") || !j.contains("kind")) {
        throw Error(Errc::invalid_argument, path + ": not a key file");
    }
    KeyFile k;
    k.group = j.at("group").get<std::string>();
    k.kind = j.at("kind").get<std::string>();
    if (k.group != grp.id()) throw Error(Errc::invalid_argument, path + ": key belongs to group " + k.group);
    if (!want_kind.empty() && k.kind != want_kind) {
        throw Error(Errc::invalid_argument, path + ": expected key kind " + std::string(want_kind));
    }
    auto names = key_names(k.kind);
    if (!j.contains(names.pub)) throw Error(Errc::invalid_argument, path + ": missing public key");
    k.pub = grp.decode(from_hex(j.at(names.pub).get<std::string>()));
    if (j.contains(names.sec)) {
        k.sec = grp.decode_scalar(from_hex(j.at(names.sec).get<std::string>()));
        if (grp.exp_g(*k.sec) != k.pub) throw Error(Errc::invalid_argument, path + ": secret does not match public key");
    }
    return k;
}

Scalar secret_of(const KeyFile& k, const std::string& path) {
    if (!k.sec) throw Error(Errc::invalid_argument, path + ": key file holds no secret");
    return *k.sec;
}

// A policy argument names a public key either by key file or by hex.
GroupElement public_key_arg(const std::string& arg, const Group& grp) {
    if (fs::exists(arg)) return read_key(arg, grp).pub;
    return grp.decode(from_hex(arg));
}

std::string default_bundle_path(const std::string& req_path) {
    fs::path p(req_path);
    return (p.parent_path() / (p.stem().string() + ".bundle.json")).string();
}

std::pair<wallet::TransactionRequest, wallet::AuthorizationBundle> read_tx(const ars::PublicParams& pp,
                                                                           const std::string& path) {
    return io::transaction_from_json(pp, read_json(path));
}

bool same_request(const wallet::TransactionRequest& a, const wallet::TransactionRequest& b) {
    return wallet::canonical_message(a) == wallet::canonical_message(b);
}

// Loads the bundle file, or starts an empty one for `req`.
wallet::AuthorizationBundle load_bundle(const ars::PublicParams& pp, const std::string& path,
                                        const wallet::TransactionRequest& req) {
    if (!fs::exists(path)) return {};
    auto [breq, bundle] = read_tx(pp, path);
    if (!same_request(breq, req)) throw Error(Errc::invalid_argument, path + ": bundle is for a different request");
    return bundle;
}

std::size_t parse_index(const std::string& s, const char* what) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != s.size() || s.starts_with('-')) {
        throw Error(Errc::invalid_argument, std::string(what) + " must be a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

struct Options {
    std::string workspace;

    std::string group;  // empty: production, or the workspace chain's group where one exists
    std::string key_kind;
    std::string out;
    std::uint64_t chain_id = 1;
    bool force = false;

    std::string address;
    std::uint64_t amount = 0;

    std::vector<std::string> rings;
    std::vector<std::string> individuals;

    std::string policy;
    std::string salt;
    std::string rule = "record";

    std::string wallet;
    std::string payload;
    std::string req;
    std::string bundle;
    std::string key;
    std::string ring;

    std::string tx;
    std::string osk;
    std::string claim;

    std::string suite;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    bool json_out = false;
    std::vector<std::size_t> sizes{4, 10};
    std::size_t runs = 100;
};

std::string group_or_default(const Options& o) { return o.group.empty() ? std::string(kProductionGroupId) : o.group; }

int cmd_chain_init(const Options& o) {
    Workspace ws(o.workspace);
    auto guard = ws.lock();
    if (ws.has_chain() && !o.force) throw Error(Errc::io_error, ws.chain_path().string() + " already exists (use --force)");
    wallet::Chain chain(ars::setup(group_or_default(o)), o.chain_id);
    ws.save(chain);
    std::cout << ws.chain_path().string() << "\n";
    return 0;
}

int cmd_chain_fund(const Options& o) {
    Workspace ws(o.workspace);
    auto guard = ws.lock();
    auto chain = ws.load();
    auto addr = wallet::address_from_hex(o.address);
    chain.credit(addr, o.amount);
    ws.save(chain);
    std::cout << chain.balance(addr) << "\n";
    return 0;
}

int cmd_chain_show(const Options& o) {
    Workspace ws(o.workspace);
    auto chain = ws.load();
    json wallets = json::array();
    for (const auto& [addr, w] : chain.wallets()) {
        wallets.push_back({{"address", wallet::address_hex(addr)},
                           {"nonce", w.nonce},
                           {"rings", w.policy.rings.size()},
                           {"individuals", w.policy.individuals.size()},
                           {"rule", wallet::format_action_rule(w.rule)},
                           {"balance", chain.balance(addr)}});
    }
    std::cout << io::dump({{"group", std::string(chain.grp().id())},
                           {"chain_id", chain.chain_id()},
                           {"wallets", wallets},
                           {"transactions", chain.log().size()}});
    return 0;
}

int cmd_keygen(const Options& o) {
    auto pp = ars::setup(group_or_default(o));
    const Group& grp = pp.grp();
    SystemRandom rng;
    GroupElement pub;
    Scalar sec;
    if (o.key_kind == "user") {
        auto kp = ars::ukgen(pp, rng);
        pub = kp.pk;
        sec = kp.sk;
    } else if (o.key_kind == "opener") {
        auto kp = ars::okgen(pp, rng);
        pub = kp.opk;
        sec = kp.osk;
    } else {
        auto kp = wallet::individual_keygen(grp, rng);
        pub = kp.vk;
        sec = kp.sigk;
    }
    auto names = key_names(o.key_kind);
    json j = {{"group", std::string(grp.id())},
              {"kind", o.key_kind},
              {names.pub, to_hex(grp.encode(pub))},
              {names.sec, to_hex(grp.encode_scalar(sec))}};
    write_file(o.out, io::dump(j));
    std::cout << to_hex(grp.encode(pub)) << "\n";
    return 0;
}

// --ring OPENER=MEMBER,MEMBER,...
int cmd_policy_create(const Options& o) {
    Workspace ws(o.workspace);
    auto pp = o.group.empty() && ws.has_chain() ? ws.load().params() : ars::setup(group_or_default(o));
    const Group& grp = pp.grp();
    wallet::Policy policy;
    for (const auto& spec : o.rings) {
        auto eq = spec.find('=');
        if (eq == std::string::npos) throw Error(Errc::invalid_argument, "--ring expects OPENER=MEMBER[,MEMBER...]");
        GroupElement opk = public_key_arg(spec.substr(0, eq), grp);
        std::vector<GroupElement> members;
        std::stringstream rest(spec.substr(eq + 1));
        for (std::string m; std::getline(rest, m, ',');) {
            if (!m.empty()) members.push_back(public_key_arg(m, grp));
        }
        policy.rings.push_back(wallet::PolicyRing{ars::Ring(std::move(members)), opk});
    }
    for (const auto& ind : o.individuals) policy.individuals.push_back(public_key_arg(ind, grp));
    try {
        wallet::validate_policy(grp, policy);
    } catch (const Error& e) {
        throw Error(Errc::invalid_policy, e.what());
    }
    emit(o.out, io::policy_to_json(grp, policy));
    return 0;
}

int cmd_wallet_deploy(const Options& o) {
    Workspace ws(o.workspace);
    auto guard = ws.lock();
    auto chain = ws.load();
    wallet::Policy policy;
    try {
        policy = io::policy_from_json(chain.grp(), read_json(o.policy));
    } catch (const Error& e) {
        if (e.code() == Errc::io_error) throw;
        throw Error(Errc::invalid_policy, e.what());
    }
    auto addr = chain.deploy_contract_wallet(std::move(policy), wallet::parse_action_rule(o.rule), from_hex(o.salt));
    ws.save(chain);
    std::cout << wallet::address_hex(addr) << "\n";
    return 0;
}

int cmd_tx_build(const Options& o) {
    auto chain = Workspace(o.workspace).load();
    auto req = chain.build_request(wallet::address_from_hex(o.wallet), from_hex(o.payload));
    emit(o.out, io::transaction_to_json(chain.params(), req, {}));
    return 0;
}

int cmd_tx_sign_ring(const Options& o) {
    auto chain = Workspace(o.workspace).load();
    const auto& pp = chain.params();
    auto [req, unused] = read_tx(pp, o.req);
    const auto& w = chain.wallet(req.wallet);
    const std::size_t ring = parse_index(o.ring, "--ring");
    if (ring >= w.policy.rings.size()) throw Error(Errc::out_of_range, "policy has no ring " + o.ring);
    auto key = read_key(o.key, pp.grp(), "user");
    const auto& pr = w.policy.rings[ring];
    SystemRandom rng;
    auto sig = ars::rsign(pp, pr.opk, wallet::canonical_message(req), pr.ring, secret_of(key, o.key), rng);

    const std::string bundle_path = o.bundle.empty() ? default_bundle_path(o.req) : o.bundle;
    auto bundle = load_bundle(pp, bundle_path, req);
    bundle.ring_sigs.emplace_back(ring, std::move(sig));
    write_file(bundle_path, io::dump(io::transaction_to_json(pp, req, bundle)));
    std::cout << bundle_path << "\n";
    return 0;
}

int cmd_tx_sign_ind(const Options& o) {
    auto chain = Workspace(o.workspace).load();
    const auto& pp = chain.params();
    auto [req, unused] = read_tx(pp, o.req);
    const auto& w = chain.wallet(req.wallet);
    auto key = read_key(o.key, pp.grp(), "individual");
    auto it = std::find(w.policy.individuals.begin(), w.policy.individuals.end(), key.pub);
    if (it == w.policy.individuals.end()) throw Error(Errc::out_of_range, "key is not an individual of this policy");
    const std::size_t index = static_cast<std::size_t>(it - w.policy.individuals.begin());
    SystemRandom rng;
    Bytes sig = wallet::individual_sign(pp.grp(), secret_of(key, o.key), wallet::canonical_message(req), rng);

    const std::string bundle_path = o.bundle.empty() ? default_bundle_path(o.req) : o.bundle;
    auto bundle = load_bundle(pp, bundle_path, req);
    bundle.ind_sigs.emplace_back(index, std::move(sig));
    write_file(bundle_path, io::dump(io::transaction_to_json(pp, req, bundle)));
    std::cout << bundle_path << "\n";
    return 0;
}

int cmd_tx_submit(const Options& o) {
    Workspace ws(o.workspace);
    auto guard = ws.lock();
    auto chain = ws.load();
    const auto& pp = chain.params();
    auto [req, unused] = read_tx(pp, o.req);
    const std::string bundle_path = o.bundle.empty() ? default_bundle_path(o.req) : o.bundle;
    auto [breq, bundle] = read_tx(pp, bundle_path);
    if (!same_request(breq, req)) throw Error(Errc::invalid_argument, bundle_path + ": bundle is for a different request");
    auto receipt = chain.submit_transaction(req, bundle);
    ws.save(chain);
    std::cout << io::dump(io::receipt_to_json(receipt));
    return 0;
}

int cmd_audit_open(const Options& o) {
    auto chain = Workspace(o.workspace).load();
    const auto& pp = chain.params();
    auto key = read_key(o.osk, pp.grp(), "opener");
    SystemRandom rng;
    auto claim = audit::open_transaction(chain, parse_index(o.tx, "--tx"), parse_index(o.ring, "--ring"),
                                         secret_of(key, o.osk), rng);
    if (!claim) throw Error(Errc::untraceable, "signature does not open to a ring member under this key");
    emit(o.out, io::claim_to_json(pp, *claim));
    return 0;
}

int cmd_audit_judge(const Options& o) {
    auto chain = Workspace(o.workspace).load();
    const std::string text = read_file(o.claim);
    bool ok = false;
    try {
        ok = audit::judge_transaction(chain, io::claim_from_json(chain.params(), io::parse(text)));
    } catch (const Error& e) {
        std::cerr << "note: claim rejected: " << e.what() << "\n";
    }
    std::cout << (ok ? 1 : 0) << "\n";
    return ok ? 0 : kExitJudgeReject;
}

int cmd_harness_run(const Options& o) {
    auto report = harness::run_suite(o.suite, ars::setup(group_or_default(o)), o.trials, o.seed);
    if (o.json_out) {
        std::cout << io::dump(harness::to_json(report));
    } else {
        std::cout << harness::format_table(report);
    }
    return 0;
}

int cmd_bench_run(const Options& o) {
    auto report = harness::run_bench(ars::setup(group_or_default(o)), o.sizes, o.runs, o.seed);
    if (o.json_out) {
        std::cout << io::dump(harness::to_json(report));
    } else {
        std::cout << harness::format_table(report);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    std::function<int(const Options&)> action;

    CLI::App app{"Anonymous-yet-accountable contract wallet simulator"};
    app.require_subcommand(1);
    app.add_option("-w,--workspace", o.workspace, "Workspace directory holding chain.json")->envname("ACW_WORKSPACE");

    auto bind = [&](CLI::App* sub, int (*fn)(const Options&)) { sub->callback([&action, fn] { action = fn; }); };
    auto group_opt = [&](CLI::App* sub) {
        sub->add_option("--group", o.group, "Group instantiation")->check(CLI::IsMember({"production", "toy"}));
    };

    auto* chain = app.add_subcommand("chain", "Chain state")->require_subcommand(1);
    auto* init = chain->add_subcommand("init", "Create an empty chain");
    group_opt(init);
    init->add_option("--chain-id", o.chain_id);
    init->add_flag("--force", o.force, "Overwrite existing state");
    bind(init, cmd_chain_init);
    auto* fund = chain->add_subcommand("fund", "Credit an account");
    fund->add_option("--address", o.address)->required();
    fund->add_option("--amount", o.amount)->required();
    bind(fund, cmd_chain_fund);
    bind(chain->add_subcommand("show", "Summarize chain state"), cmd_chain_show);

    auto* keygen = app.add_subcommand("keygen", "Generate a key file");
    keygen->add_option("kind", o.key_kind)->required()->check(CLI::IsMember({"user", "opener", "individual"}));
    group_opt(keygen);
    keygen->add_option("--out", o.out)->required();
    bind(keygen, cmd_keygen);

    auto* policy = app.add_subcommand("policy", "Policy files")->require_subcommand(1);
    auto* pcreate = policy->add_subcommand("create", "Assemble a policy from key files or hex keys");
    pcreate->add_option("--ring", o.rings, "OPENER=MEMBER[,MEMBER...]");
    pcreate->add_option("--individual", o.individuals);
    group_opt(pcreate);
    pcreate->add_option("--out", o.out);
    bind(pcreate, cmd_policy_create);

    auto* wal = app.add_subcommand("wallet", "Contract wallets")->require_subcommand(1);
    auto* deploy = wal->add_subcommand("deploy", "DeployContractWallet");
    deploy->add_option("--policy", o.policy)->required();
    deploy->add_option("--salt", o.salt)->required();
    deploy->add_option("--rule", o.rule, "record | transfer:<amount>:<address>");
    bind(deploy, cmd_wallet_deploy);

    auto* tx = app.add_subcommand("tx", "Transactions")->require_subcommand(1);
    auto* build = tx->add_subcommand("build", "Request at the wallet's current nonce");
    build->add_option("--wallet", o.wallet)->required();
    build->add_option("--payload", o.payload)->required();
    build->add_option("--out", o.out);
    bind(build, cmd_tx_build);
    auto* sring = tx->add_subcommand("sign-ring", "Add a ring signature to the bundle");
    sring->add_option("--req", o.req)->required();
    sring->add_option("--key", o.key)->required();
    sring->add_option("--ring", o.ring)->required();
    sring->add_option("--bundle", o.bundle);
    bind(sring, cmd_tx_sign_ring);
    auto* sind = tx->add_subcommand("sign-ind", "Add an individual signature to the bundle");
    sind->add_option("--req", o.req)->required();
    sind->add_option("--key", o.key)->required();
    sind->add_option("--bundle", o.bundle);
    bind(sind, cmd_tx_sign_ind);
    auto* submit = tx->add_subcommand("submit", "SendTransaction");
    submit->add_option("--req", o.req)->required();
    submit->add_option("--bundle", o.bundle);
    bind(submit, cmd_tx_submit);

    auto* aud = app.add_subcommand("audit", "Accountability")->require_subcommand(1);
    auto* aopen = aud->add_subcommand("open", "Identify a ring signer");
    aopen->add_option("--tx", o.tx)->required();
    aopen->add_option("--ring", o.ring)->required();
    aopen->add_option("--osk", o.osk)->required();
    aopen->add_option("--out", o.out);
    bind(aopen, cmd_audit_open);
    auto* ajudge = aud->add_subcommand("judge", "Check an opening claim");
    ajudge->add_option("--claim", o.claim)->required();
    bind(ajudge, cmd_audit_judge);

    auto* har = app.add_subcommand("harness", "Security games")->require_subcommand(1);
    auto* hrun = har->add_subcommand("run", "Run one game suite");
    hrun->add_option("suite", o.suite)->required()->check(
        CLI::IsMember({"unforgeability", "anonymity", "traceability", "tracing-soundness"}));
    group_opt(hrun);
    hrun->add_option("--trials", o.trials);
    hrun->add_option("--seed", o.seed);
    hrun->add_flag("--json", o.json_out);
    bind(hrun, cmd_harness_run);

    auto* bench = app.add_subcommand("bench", "Timing")->require_subcommand(1);
    auto* brun = bench->add_subcommand("run", "Mean time per algorithm and ring size");
    group_opt(brun);
    brun->add_option("--sizes", o.sizes);
    brun->add_option("--runs", o.runs);
    brun->add_option("--seed", o.seed);
    brun->add_flag("--json", o.json_out);
    bind(brun, cmd_bench_run);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        return action(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: io-error: " << e.what() << "\n";
        return exit_code(Errc::io_error);
    } catch (const json::exception& e) {
        std::cerr << "error: invalid-argument: " << e.what() << "\n";
        return exit_code(Errc::invalid_argument);
    }
}
