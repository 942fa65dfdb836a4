#include "kcsp/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kcsp {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError("malformed JSON");
    return j;
}

template <typename T>
T field(const json& j, const char* name) {
    if (!j.contains(name)) throw ValidationError(std::string("missing field \"") + name + "\"");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("field \"") + name + "\" has the wrong type");
    }
}

}  // namespace

std::string instance_to_json(const CspInstance& inst) {
    json j;
    j["n"] = inst.n;
    j["R"] = inst.R;
    j["constraints"] = json::array();
    for (const Constraint& c : inst.constraints) {
        json jc;
        jc["weight"] = c.weight;
        jc["scope"] = c.scope;
        jc["predicate"] = json::array();
        for (std::uint8_t v : c.predicate) jc["predicate"].push_back(static_cast<int>(v));
        j["constraints"].push_back(std::move(jc));
    }
    return j.dump(2);
}

CspInstance instance_from_json(const std::string& text) {
    json j = parse(text);
    CspInstance inst;
    inst.n = field<int>(j, "n");
    inst.R = field<int>(j, "R");
    if (!j.contains("constraints") || !j.at("constraints").is_array())
        throw ValidationError("missing field \"constraints\"");
    for (const json& jc : j.at("constraints")) {
        Constraint c;
        c.weight = field<double>(jc, "weight");
        c.scope = field<std::vector<int>>(jc, "scope");
        auto pred = field<std::vector<int>>(jc, "predicate");
        c.predicate.reserve(pred.size());
        for (int v : pred) {
            if (v != 0 && v != 1) throw ValidationError("predicate entries must be 0 or 1");
            c.predicate.push_back(static_cast<std::uint8_t>(v));
        }
        inst.constraints.push_back(std::move(c));
    }
    inst.validate();
    return inst;
}

std::string game_to_json(const Game& game) {
    json j;
    j["kind"] = game.kind == GameKind::unique ? "unique" : "d-to-1";
    if (game.kind == GameKind::d_to_1) j["d"] = game.d;
    j["V"] = game.num_left;
    j["W"] = game.num_right;
    j["N"] = game.N;
    j["edges"] = json::array();
    for (const GameEdge& e : game.edges) {
        json je;
        je["v"] = e.v;
        je["w"] = e.w;
        je["map"] = json::array();
        for (int img : e.map) je["map"].push_back(img + 1);  // 1-based label values on disk
        j["edges"].push_back(std::move(je));
    }
    return j.dump(2);
}

Game game_from_json(const std::string& text) {
    json j = parse(text);
    Game game;
    auto kind = field<std::string>(j, "kind");
    if (kind == "unique") {
        game.kind = GameKind::unique;
        game.d = 1;
    } else if (kind == "d-to-1") {
        game.kind = GameKind::d_to_1;
        game.d = field<int>(j, "d");
    } else {
        throw ValidationError("field \"kind\" must be \"unique\" or \"d-to-1\"");
    }
    game.num_left = field<int>(j, "V");
    game.num_right = field<int>(j, "W");
    game.N = field<int>(j, "N");
    if (!j.contains("edges") || !j.at("edges").is_array())
        throw ValidationError("missing field \"edges\"");
    for (const json& je : j.at("edges")) {
        GameEdge e;
        e.v = field<int>(je, "v");
        e.w = field<int>(je, "w");
        e.map = field<std::vector<int>>(je, "map");
        for (int& img : e.map) --img;
        game.edges.push_back(std::move(e));
    }
    game.validate();
    return game;
}

std::string proof_to_json(const Proof& proof) {
    json j;
    j["R"] = proof.R;
    j["tables"] = json::object();
    for (std::size_t w = 0; w < proof.tables.size(); ++w)
        j["tables"][std::to_string(w)] = proof.tables[w];
    return j.dump();
}

Proof proof_from_json(const std::string& text) {
    json j = parse(text);
    Proof proof;
    proof.R = field<int>(j, "R");
    if (proof.R < 2) throw ValidationError("field \"R\" must be at least 2");
    if (!j.contains("tables") || !j.at("tables").is_object())
        throw ValidationError("missing field \"tables\"");
    const json& tables = j.at("tables");
    proof.tables.resize(tables.size());
    for (const auto& [key, value] : tables.items()) {
        std::size_t w = 0;
        try {
            w = std::stoul(key);
        } catch (const std::exception&) {
            throw ValidationError("table key \"" + key + "\" is not a vertex index");
        }
        if (w >= proof.tables.size())
            throw ValidationError("table keys must be 0.." + std::to_string(proof.tables.size() - 1));
        proof.tables[w] = value.get<std::vector<int>>();
    }
    if (proof.tables.empty()) throw ValidationError("proof has no tables");
    // infer n from the first table
    std::size_t len = proof.tables.front().size();
    int n = 0;
    std::size_t p = 1;
    while (p < len) {
        p *= static_cast<std::size_t>(proof.R);
        ++n;
    }
    if (p != len) throw ValidationError("table length is not a power of R");
    proof.n = n;
    proof.validate();
    return proof;
}

std::string rfunction_to_json(const RFunction& f) {
    json j;
    j["n"] = f.n;
    j["R"] = f.R;
    j["table"] = f.table;
    return j.dump();
}

RFunction rfunction_from_json(const std::string& text) {
    json j = parse(text);
    RFunction f;
    f.n = field<int>(j, "n");
    f.R = field<int>(j, "R");
    f.table = field<std::vector<int>>(j, "table");
    f.validate();
    return f;
}

std::string fourier_rep_to_json(const FourierRep& rep) {
    json j = json::object();
    for (std::size_t s = 0; s < rep.coeffs.size(); ++s)
        if (std::abs(rep.coeffs[s]) > 1e-12) j[std::to_string(s)] = rep.coeffs[s];
    return j.dump();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file " + path);
    out << contents;
}

}  // namespace kcsp
