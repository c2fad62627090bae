#include "muord/io.hpp"

#include <sstream>

namespace muord::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(Errc::ParseError, where + ": " + what);
}

int get_int(const Json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number_integer()) fail(where, "missing integer field '" + key + "'");
    return j[key].get<int>();
}

}  // namespace

Input parse_input(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail("input", e.what());
    }
    if (!doc.is_object() || !doc.contains("places") || !doc["places"].is_array())
        fail("input", "expected an object with a 'places' array");

    Input in;
    std::vector<std::vector<int>> orders;
    for (std::size_t p = 0; p < doc["places"].size(); ++p) {
        const auto& jp = doc["places"][p];
        std::string where = "places[" + std::to_string(p) + "]";
        if (!jp.is_object()) fail(where, "expected an object");
        std::string cs = jp.value("case", "");
        PlaceCase kind;
        if (cs == "L")
            kind = PlaceCase::L;
        else if (cs == "U")
            kind = PlaceCase::U;
        else
            fail(where, "'case' must be \"L\" or \"U\"");
        int f = get_int(jp, "f", where);
        if (!jp.contains("signatures") || !jp["signatures"].is_array() ||
            static_cast<int>(jp["signatures"].size()) != f)
            fail(where, "'signatures' must list f pairs");
        std::vector<std::pair<int, int>> sig;
        for (const auto& js : jp["signatures"]) {
            if (!js.is_array() || js.size() != 2 || !js[0].is_number_integer() || !js[1].is_number_integer())
                fail(where, "each signature is a pair [a, b]");
            sig.emplace_back(js[0].get<int>(), js[1].get<int>());
        }
        PlaceDatum place(kind, sig);
        orders.push_back(place.input_order);
        in.datum.places.push_back(std::move(place));
    }

    if (doc.contains("weight")) {
        const auto& jw = doc["weight"];
        if (!jw.is_array() || jw.size() != in.datum.places.size())
            fail("weight", "expected one block per place");
        Weight w;
        for (std::size_t p = 0; p < jw.size(); ++p) {
            const auto& place = in.datum.places[p];
            std::string where = "weight[" + std::to_string(p) + "]";
            if (!jw[p].is_array() || static_cast<int>(jw[p].size()) != place.f)
                fail(where, "expected f sigma blocks");
            PlaceWeight pw;
            pw.per_sigma.resize(place.f);
            for (int s = 0; s < place.f; ++s) {
                // weight follows the input order; realign to the sorted signatures
                const auto& js = jw[p][orders[p][s]];
                if (!js.is_object() || !js.contains("kappa") || !js.contains("lambda"))
                    fail(where, "sigma blocks need 'kappa' and 'lambda'");
                SigmaWeight sw;
                for (const auto& v : js["kappa"]) sw.kappa.push_back(v.get<int>());
                for (const auto& v : js["lambda"]) sw.lambda.push_back(v.get<int>());
                pw.per_sigma[s] = std::move(sw);
            }
            w.places.push_back(std::move(pw));
        }
        in.weight = std::move(w);
    }

    if (doc.contains("valuations")) {
        const auto& jv = doc["valuations"];
        if (!jv.is_object()) fail("valuations", "expected an object");
        for (auto it = jv.begin(); it != jv.end(); ++it) {
            const std::string& key = it.key();
            auto slash = key.find('/');
            if (slash == std::string::npos) fail("valuations", "key '" + key + "' is not <place>/<k>");
            int p = -1, k = -1;
            try {
                p = std::stoi(key.substr(0, slash));
                k = std::stoi(key.substr(slash + 1));
            } catch (...) {
                fail("valuations", "key '" + key + "' is not <place>/<k>");
            }
            if (!it.value().is_string()) fail("valuations", key + ": value must be a \"num/den\" string");
            auto r = parse_rat(it.value().get<std::string>());
            if (!r) fail("valuations", key + ": bad rational");
            in.valuations[{p, k}] = *r;
        }
    }
    return in;
}

Json rat_json(const Rat& r) { return Json(rat_string(r)); }

Json analyze_report(const GlobalDatum& datum, const ValidationReport& validation) {
    Json rep;
    rep["tool"] = "muord";
    rep["report"] = "analyze";
    rep["valid"] = validation.ok();
    rep["warnings"] = validation.warnings;
    Json errs = Json::array();
    for (const auto& e : validation.errors)
        errs.push_back(Json{{"code", errc_name(e.code)}, {"detail", e.detail}});
    rep["errors"] = errs;
    if (!validation.ok()) return rep;

    rep["degree"] = datum.degree();
    rep["a_plus_b"] = datum.a_plus_b();
    Json places = Json::array();
    for (const auto& place : datum.places) {
        Json jp;
        jp["case"] = place.kind == PlaceCase::L ? "L" : "U";
        jp["f"] = place.f;
        Json sig = Json::array();
        for (const auto& [a, b] : place.signatures) sig.push_back(Json::array({a, b}));
        jp["signatures"] = sig;
        jp["canonical_heights"] = canonical_heights(place);
        jp["max_degrees"] = max_degrees(place);
        if (place.kind == PlaceCase::U) jp["alpha_sequence"] = alpha_sequence(place);
        Json dec = Json::array();
        for (const auto& fac : mu_ordinary_decomposition(place))
            dec.push_back(Json{{"epsilon", fac.epsilon}, {"multiplicity", fac.multiplicity}});
        jp["mu_ordinary_decomposition"] = dec;
        jp["ordinary_locus_exists"] = ordinary_exists(place);
        auto classes = sigma_classes(place);
        Json jc = Json::array();
        for (const auto& cls : classes.classes) jc.push_back(cls);
        jp["sigma_classes"] = jc;
        places.push_back(std::move(jp));
    }
    rep["places"] = places;
    return rep;
}

Json check_report(const GlobalDatum& datum, const hecke::ClassicalityReport& cls,
                  const continuation::Schedule& schedule) {
    Json rep;
    rep["tool"] = "muord";
    rep["report"] = "check";
    rep["verdict"] = cls.all_pass ? "pass" : "fail";
    Json conds = Json::array();
    for (const auto& c : cls.conditions) {
        Json jc;
        jc["place"] = c.place;
        jc["k"] = c.k;
        jc["height"] = c.height;
        jc["n"] = c.n;
        jc["valuation"] = rat_json(c.valuation);
        jc["weight_inf"] = c.weight_inf;
        jc["pass"] = c.pass;
        if (!c.closed_form.empty()) jc["closed_form"] = c.closed_form;
        conds.push_back(std::move(jc));
    }
    rep["conditions"] = conds;
    (void)datum;

    Json js;
    js["ok"] = schedule.ok;
    if (!schedule.ok) js["failed_step"] = schedule.failed_step;
    js["note"] = schedule.note;
    Json steps = Json::array();
    for (const auto& st : schedule.steps) {
        Json j;
        j["place"] = st.place;
        j["k"] = st.k;
        j["height"] = st.height;
        j["K"] = rat_json(st.K);
        j["eps_max"] = rat_json(st.eps_max);
        j["admissible"] = st.admissible;
        std::string ch;
        for (auto c : st.eps_choices) ch += c == EpsChoice::Full ? 'd' : 'e';
        j["eps_choices"] = ch;
        steps.push_back(std::move(j));
    }
    js["steps"] = steps;
    rep["schedule"] = js;
    return rep;
}

Json config_json(const degree::DegreeConfig& config) {
    Json j;
    j["case"] = config.kind == PlaceCase::L ? "L" : "U";
    j["ambient_height"] = config.ambient_height;
    j["grid"] = config.grid_den;
    Json caps = Json::array(), dual = Json::array();
    for (const auto& c : config.caps) caps.push_back(rat_json(c));
    for (const auto& c : config.dual_caps) dual.push_back(rat_json(c));
    j["caps"] = caps;
    j["dual_caps"] = dual;
    Json nodes = Json::array();
    for (std::size_t n = 0; n < config.nodes.size(); ++n) {
        Json jn;
        jn["label"] = config.nodes[n].label;
        jn["height"] = config.nodes[n].height;
        jn["side"] = config.sides[n] == degree::Side::Primal ? "primal" : "dual";
        Json deg = Json::array();
        for (const auto& d : config.nodes[n].deg) deg.push_back(rat_json(d));
        jn["degrees"] = deg;
        jn["total"] = rat_json(config.nodes[n].total());
        nodes.push_back(std::move(jn));
    }
    j["nodes"] = nodes;
    Json rel = Json::array();
    for (const auto& c : config.containments)
        rel.push_back(Json{{"kind", "containment"}, {"sub", c.sub}, {"sup", c.sup}});
    for (const auto& si : config.sum_intersections)
        rel.push_back(Json{{"kind", "sum_intersection"},
                           {"x", si.x},
                           {"y", si.y},
                           {"sum", si.sum},
                           {"inter", si.inter}});
    for (const auto& q : config.quotients)
        rel.push_back(Json{{"kind", "quotient"}, {"sub", q.sub}, {"sup", q.sup}, {"quot", q.quot}});
    for (const auto& o : config.orthogonals)
        rel.push_back(Json{{"kind", "orthogonal"}, {"node", o.node}, {"dual", o.dual}});
    j["relations"] = rel;
    return j;
}

namespace {

void render(const Json& j, const std::string& prefix, std::ostringstream& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.value().is_object() || it.value().is_array()) {
                out << prefix << it.key() << ":\n";
                render(it.value(), prefix + "  ", out);
            } else {
                out << prefix << it.key() << ": " << it.value().dump() << "\n";
            }
        }
    } else if (j.is_array()) {
        bool scalar = true;
        for (const auto& v : j)
            if (v.is_object() || v.is_array()) scalar = false;
        if (scalar) {
            out << prefix << j.dump() << "\n";
            return;
        }
        for (std::size_t i = 0; i < j.size(); ++i) {
            out << prefix << "- [" << i << "]\n";
            render(j[i], prefix + "  ", out);
        }
    } else {
        out << prefix << j.dump() << "\n";
    }
}

}  // namespace

std::string render_text(const Json& report) {
    std::ostringstream out;
    render(report, "", out);
    return out.str();
}

}  // namespace muord::io
