#include "gchain/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace gchain {

double parse_real(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string& s = v.get_ref<const std::string&>();
        size_t used = 0;
        double out = std::stod(s, &used);
        if (used != s.size())
            throw Error(Error::Code::BadInput, "malformed decimal string: " + s);
        return out;
    }
    throw Error(Error::Code::BadInput, "expected a real number or decimal string");
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

kernels::AlphaRule alpha_from_json(const json& doc) {
    kernels::AlphaRule rule;
    std::string kind = doc.at("kind").get<std::string>();
    const json& params = doc.contains("params") ? doc.at("params") : json::object();
    if (kind == "geometric") {
        rule.kind = kernels::AlphaRule::Kind::geometric;
        rule.ratio = params.contains("ratio") ? parse_real(params.at("ratio")) : 0.5;
    } else if (kind == "powerlaw") {
        rule.kind = kernels::AlphaRule::Kind::powerlaw;
        rule.exponent = parse_real(params.at("exponent"));
    } else if (kind == "explicit") {
        rule.kind = kernels::AlphaRule::Kind::explicit_list;
        for (const auto& v : params.at("values")) rule.values.push_back(parse_real(v));
    } else {
        throw Error(Error::Code::BadInput, "unknown alpha kind: " + kind);
    }
    return rule;
}

kernels::BetaRule beta_from_json(const json& doc) {
    kernels::BetaRule rule;
    std::string kind = doc.at("kind").get<std::string>();
    const json& params = doc.contains("params") ? doc.at("params") : json::object();
    if (kind == "geometric") {
        rule.kind = kernels::BetaRule::Kind::geometric;
        rule.b0 = parse_real(params.at("b0"));
        rule.ratio = params.contains("ratio") ? parse_real(params.at("ratio")) : 0.5;
    } else if (kind == "explicit") {
        rule.kind = kernels::BetaRule::Kind::explicit_list;
        for (const auto& v : params.at("values")) rule.values.push_back(parse_real(v));
    } else {
        throw Error(Error::Code::BadInput, "unknown beta kind: " + kind);
    }
    return rule;
}

}  // namespace

kernels::QRule qrule_from_json(const json& q_doc, const json* q_inf) {
    kernels::QRule rule;
    std::string kind = q_doc.at("kind").get<std::string>();
    const json& params = q_doc.contains("params") ? q_doc.at("params") : json::object();
    if (kind == "constant") {
        rule.kind = kernels::QRule::Kind::constant;
        rule.c = parse_real(params.at("c"));
    } else if (kind == "harmonic_shift") {
        rule.kind = kernels::QRule::Kind::harmonic_shift;
        rule.a = parse_real(params.at("a"));
        rule.b = parse_real(params.at("b"));
    } else if (kind == "custom_rational") {
        rule.kind = kernels::QRule::Kind::custom_rational;
        rule.p0 = parse_real(params.at("p0"));
        rule.p1 = params.contains("p1") ? parse_real(params.at("p1")) : 0.0;
        rule.r0 = parse_real(params.at("r0"));
        rule.r1 = params.contains("r1") ? parse_real(params.at("r1")) : 0.0;
    } else {
        throw Error(Error::Code::BadInput, "unknown q kind: " + kind);
    }
    if (q_inf && !q_inf->is_null()) rule.declared_q_inf = parse_real(*q_inf);
    return rule;
}

KernelPtr kernel_from_json(const json& doc) {
    std::string tag = doc.at("kernel").get<std::string>();
    const json& params = doc.contains("params") ? doc.at("params") : json::object();
    if (tag == "markov") {
        int order = params.at("order").get<int>();
        std::vector<std::vector<double>> rows;
        for (const auto& row : params.at("rows")) {
            std::vector<double> r;
            for (const auto& v : row) r.push_back(parse_real(v));
            rows.push_back(std::move(r));
        }
        std::vector<long> labels;
        if (params.contains("labels"))
            for (const auto& v : params.at("labels")) labels.push_back(v.get<long>());
        return kernels::make_markov(order, rows, std::move(labels));
    }
    if (tag == "graph_walk") {
        std::vector<std::pair<Symbol, Symbol>> edges;
        for (const auto& e : params.at("edges"))
            edges.emplace_back(e.at(0).get<Symbol>(), e.at(1).get<Symbol>());
        double bias = params.contains("bias") ? parse_real(params.at("bias")) : 0.0;
        double decay = params.contains("decay") ? parse_real(params.at("decay")) : 0.5;
        return kernels::make_graph_walk(edges, bias, decay);
    }
    if (tag == "sparse_chain") return kernels::make_sparse_chain();
    if (tag == "autoregressive") {
        kernels::AlphaRule alpha = alpha_from_json(params.at("alpha"));
        int eps = params.at("epsilon").get<int>();
        return kernels::make_autoregressive(alpha, eps);
    }
    if (tag == "renewal") {
        const json* qi = params.contains("q_inf") ? &params.at("q_inf") : nullptr;
        return kernels::make_renewal(qrule_from_json(params.at("q"), qi));
    }
    if (tag == "poisson_infinite") {
        kernels::BetaRule beta = beta_from_json(params.at("beta"));
        double gamma = parse_real(params.at("gamma"));
        return kernels::make_poisson(beta, gamma);
    }
    throw Error(Error::Code::BadInput, "unknown kernel tag: " + tag);
}

KernelPtr kernel_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Error::Code::BadInput, "cannot open kernel config: " + path);
    json doc = json::parse(in);
    return kernel_from_json(doc);
}

Word parse_word(const std::string& text, const Alphabet& alph) {
    std::vector<Symbol> syms;
    auto push_label = [&](const std::string& tok) {
        if (tok.empty()) throw Error(Error::Code::BadInput, "empty symbol in word");
        long lab = std::stol(tok);
        Symbol s = alph.symbol_of(lab);
        if (s < 0)
            throw Error(Error::Code::BadInput, "label " + tok + " is not in the alphabet");
        syms.push_back(s);
    };
    if (text.find(',') != std::string::npos) {
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ',')) push_label(tok);
    } else if (!text.empty() && text[0] == '-') {
        push_label(text);  // a lone negative label, e.g. "-1"
    } else {
        for (char c : text) {
            if (c < '0' || c > '9')
                throw Error(Error::Code::BadInput,
                            "packed words use digits only; separate labels with commas");
            push_label(std::string(1, c));
        }
    }
    if (syms.empty()) throw Error(Error::Code::BadInput, "empty word");
    return Word(std::move(syms));
}

PastSpec parse_past(const std::string& text, const Alphabet& alph) {
    size_t mark = text.find("^inf");
    if (mark == std::string::npos)
        throw Error(Error::Code::BadInput, "past syntax is \"tail^inf transient\"");
    Word tail = parse_word(text.substr(0, mark), alph);
    std::string rest = text.substr(mark + 4);
    size_t begin = rest.find_first_not_of(" \t");
    Word transient;
    if (begin != std::string::npos) {
        size_t end = rest.find_last_not_of(" \t");
        transient = parse_word(rest.substr(begin, end - begin + 1), alph);
    }
    return PastSpec(transient, tail);
}

json to_json(const BoolMatrix& m, int K, const Alphabet& alph) {
    json rows = json::array();
    json edges = json::array();
    for (uint64_t i = 0; i < m.dim(); ++i) {
        rows.push_back(m.row_bits(i));
        for (uint64_t j : m.out_neighbors(i))
            edges.push_back({word_at_index(i, K, alph.size).to_string(alph),
                             word_at_index(j, K, alph.size).to_string(alph)});
    }
    return json{{"K", K}, {"dim", m.dim()}, {"rows", rows}, {"edges", edges}};
}

namespace {

std::string verdict_name(EriVerdict v) {
    switch (v) {
        case EriVerdict::ERI: return "ERI";
        case EriVerdict::NotERI: return "NotERI";
        case EriVerdict::Undecided: return "Undecided";
    }
    return "Undecided";
}

}  // namespace

json to_json(const EriReport& r, const Alphabet& alph) {
    json out;
    out["verdict"] = verdict_name(r.verdict);
    out["reason"] = r.reason;
    if (r.core_is_full_space) {
        out["P_K"] = "all";
    } else {
        json pk = json::array();
        for (const auto& w : r.core) pk.push_back(w.to_string(alph));
        out["P_K"] = pk;
    }
    json wit = json::object();
    for (const auto& [w, n] : r.primitivity_witness) wit[w.to_string(alph)] = n;
    out["witnesses"] = wit;
    json hit;
    switch (r.hitting.kind) {
        case HittingEvidence::Kind::none: hit["kind"] = "none"; break;
        case HittingEvidence::Kind::analytic: hit["kind"] = "analytic"; break;
        case HittingEvidence::Kind::monte_carlo:
            hit["kind"] = "monte_carlo";
            hit["trials"] = r.hitting.trials;
            hit["cap"] = r.hitting.cap;
            hit["timeouts"] = r.hitting.timeouts;
            hit["starts"] = r.hitting.starts;
            break;
    }
    out["hitting"] = hit;
    json cands = json::array();
    for (const auto& c : r.candidates) {
        json cl = json::array();
        for (const auto& w : c) cl.push_back(w.to_string(alph));
        cands.push_back(cl);
    }
    out["candidates"] = cands;
    return out;
}

json to_json(const AssumptionB& b, const Alphabet& alph) {
    json out;
    switch (b.status) {
        case AssumptionB::Status::holds: out["status"] = "holds"; break;
        case AssumptionB::Status::violated: out["status"] = "violated"; break;
        case AssumptionB::Status::undecided: out["status"] = "undecided"; break;
    }
    if (b.witness) out["witness"] = b.witness->to_string(alph);
    return out;
}

json to_json(const AssumptionC& c, const Alphabet& alph) {
    json out;
    switch (c.status) {
        case AssumptionC::Status::holds_on_probes: out["status"] = "holds_on_probes"; break;
        case AssumptionC::Status::violated: out["status"] = "violated"; break;
        case AssumptionC::Status::undecided: out["status"] = "undecided"; break;
    }
    json wit = json::object();
    for (const auto& [past, w] : c.witnesses) wit[past.to_string(alph)] = w.to_string(alph);
    out["witnesses"] = wit;
    if (c.violating_probe) out["probe"] = c.violating_probe->to_string(alph);
    return out;
}

json to_json(const DkSeries& s) {
    json out;
    out["k"] = s.ks;
    out["dk_mean"] = s.dk_mean;
    out["dk_max"] = s.dk_max;
    out["partial_sums"] = s.partial_sums;
    switch (s.verdict) {
        case SummabilityVerdict::summable_evidence: out["verdict"] = "summable_evidence"; break;
        case SummabilityVerdict::diverging_evidence:
            out["verdict"] = "diverging_evidence";
            break;
        case SummabilityVerdict::inconclusive: out["verdict"] = "inconclusive"; break;
    }
    out["n_offset"] = s.n_offset;
    out["replicas"] = s.replicas;
    out["retries"] = s.retries;
    return out;
}

json to_json(const HittingReport& r) {
    json out;
    out["samples"] = r.samples;
    out["cap"] = r.cap;
    out["empirical_mean"] = r.empirical_mean;
    out["timeout_fraction"] = r.timeout_fraction;
    return out;
}

json to_json(const TvEstimate& t) {
    json out;
    out["lo"] = t.value.lo;
    out["hi"] = t.value.hi;
    out["exact"] = t.exact;
    if (!t.exact) out["std_error"] = t.std_error;
    return out;
}

json to_json(const kernels::RenewalClassification& c) {
    json out;
    if (c.verdict) {
        switch (*c.verdict) {
            case kernels::RenewalCase::UniqueTrivial_1a: out["case"] = "1a"; break;
            case kernels::RenewalCase::PhaseTransition_1b: out["case"] = "1b"; break;
            case kernels::RenewalCase::NoStationary_2a: out["case"] = "2a"; break;
            case kernels::RenewalCase::UniqueRenewal_2b: out["case"] = "2b"; break;
        }
    } else {
        out["case"] = nullptr;
    }
    out["q_inf"] = c.q_inf;
    switch (c.series) {
        case kernels::SeriesVerdict::convergent: out["series"] = "convergent"; break;
        case kernels::SeriesVerdict::divergent: out["series"] = "divergent"; break;
        case kernels::SeriesVerdict::inconclusive: out["series"] = "inconclusive"; break;
    }
    out["partial_sum"] = c.partial_sum;
    out["terms"] = c.terms;
    return out;
}

json to_json(const SimConfig& c) {
    return json{{"seed", c.seed},
                {"replicas", c.replicas},
                {"horizon", c.horizon},
                {"burn_in", c.burn_in},
                {"tol", c.tol}};
}

std::string dk_series_csv(const DkSeries& s) {
    std::string out = "k,dk_mean,dk_max,partial_sum\n";
    for (size_t i = 0; i < s.ks.size(); ++i) {
        out += std::to_string(s.ks[i]) + "," + fmt(s.dk_mean[i]) + "," + fmt(s.dk_max[i]) + "," +
               fmt(s.partial_sums[i]) + "\n";
    }
    return out;
}

std::string hitting_csv(const HittingReport& r) {
    std::string out = "replica,hitting_time,timeout\n";
    for (size_t i = 0; i < r.samples.size(); ++i) {
        bool to = r.samples[i] < 0;
        out += std::to_string(i) + "," + (to ? "" : std::to_string(r.samples[i])) + "," +
               (to ? "1" : "0") + "\n";
    }
    return out;
}

}  // namespace gchain
