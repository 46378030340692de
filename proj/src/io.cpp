#include "opseq/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/core.h>
#include <json.hpp>

#include "opseq/error.hpp"

namespace opseq {

using json = nlohmann::json;

DocumentError::DocumentError(std::string path, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(line > 0 ? fmt::format("line {}, column {}: {}", line, column, message)
                                  : fmt::format("{}: {}", path.empty() ? "document" : path, message)),
      path_(std::move(path)), line_(line), column_(column)
{
}

namespace {

constexpr const char* kFormat = "opseq-tower";
constexpr int kVersion = 1;

// ---------------------------------------------------------------- writing

std::string row_text(const Ring& ring, const Matrix& m, std::size_t r)
{
    std::string s;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (c)
            s += ' ';
        s += ring.format(m(r, c));
    }
    return s;
}

json matrix_json(const Ring& ring, const Matrix& m)
{
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r)
        rows.push_back(row_text(ring, m, r));
    return rows;
}

std::string vector_text(const Ring& ring, const Vector& v)
{
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k)
            s += ' ';
        s += ring.format(v[k]);
    }
    return s;
}

bool same_operad(const Operad& a, const Operad& b)
{
    if (!(a.ring == b.ring) || a.arity_cap != b.arity_cap || a.name != b.name || a.unit != b.unit ||
        a.compositions != b.compositions || a.components.size() != b.components.size())
        return false;
    for (std::size_t n = 1; n < a.components.size(); ++n) {
        const auto& x = a.components[n];
        const auto& y = b.components[n];
        if (x.labels != y.labels || x.degrees != y.degrees || x.delta != y.delta || x.transpositions != y.transpositions)
            return false;
    }
    return true;
}

json operad_json(const Operad& o)
{
    for (const char* name : {"comm", "assoc", "lie"}) {
        if (o.name != name)
            continue;
        try {
            if (same_operad(o, builtin_operad(name, o.ring, o.arity_cap)))
                return json{{"builtin", name}, {"arity_cap", o.arity_cap}};
        } catch (const Error&) {
        }
    }
    json comps = json::array();
    for (int n = 1; n <= o.arity_cap; ++n) {
        const auto& c = o.component(n);
        json t = json::array();
        for (const auto& m : c.transpositions)
            t.push_back(matrix_json(o.ring, m));
        comps.push_back({{"arity", n}, {"labels", c.labels}, {"degrees", c.degrees}, {"delta", matrix_json(o.ring, c.delta)},
                         {"transpositions", t}});
    }
    json compositions = json::array();
    for (const auto& [key, m] : o.compositions) {
        if (m.is_zero())
            continue;
        auto [mm, nn, ii] = key;
        compositions.push_back({{"m", mm}, {"n", nn}, {"i", ii}, {"matrix", matrix_json(o.ring, m)}});
    }
    return json{{"name", o.name},
                {"arity_cap", o.arity_cap},
                {"components", comps},
                {"compositions", compositions},
                {"unit", vector_text(o.ring, o.unit)}};
}

json module_json(const BigradedModule& m)
{
    json out = json::array();
    for (const auto& [b, c] : m.components()) {
        json e{{"p", b.p}, {"q", b.q}, {"labels", c.labels}};
        if (c.has_torsion()) {
            json orders = json::array();
            for (const auto& o : c.orders)
                orders.push_back(o.get_str());
            e["orders"] = orders;
        }
        out.push_back(e);
    }
    return out;
}

json blocks_json(const Ring& ring, const GradedMap& f)
{
    json out = json::array();
    for (const auto& [b, m] : f.blocks) {
        if (m.rows() == 0 || m.cols() == 0 || m.is_zero())
            continue;
        out.push_back({{"source", {b.p, b.q}}, {"matrix", matrix_json(ring, m)}});
    }
    return out;
}

json algebra_json(const OperadAlgebra& a)
{
    const Ring& ring = a.ring();
    const BigradedModule& mod = a.carrier.module;
    std::vector<std::pair<GammaKey, const Vector*>> entries;
    for (const auto& [k, v] : a.gamma)
        if (!is_zero(v))
            entries.push_back({k, &v});
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    json gamma = json::array();
    for (const auto& [k, v] : entries) {
        json inputs = json::array();
        for (const auto& g : k.inputs)
            inputs.push_back({mod.find(g.b)->labels[g.index], g.b.p, g.b.q});
        gamma.push_back({{"op", a.operad.component(k.arity).labels[k.op]}, {"inputs", inputs}, {"value", vector_text(ring, *v)}});
    }
    json out{{"components", module_json(mod)}, {"d", blocks_json(ring, a.carrier.d)}, {"gamma", gamma}};
    if (a.clamp_p)
        out["clamp_p"] = *a.clamp_p;
    return out;
}

// ---------------------------------------------------------------- reading

class Reader {
public:
    explicit Reader(Ring ring) : ring_(ring) {}

    [[noreturn]] static void fail(const std::string& path, const std::string& message) { throw DocumentError(path, 0, 0, message); }

    static const json& field(const json& obj, const std::string& path, const char* key)
    {
        if (!obj.is_object())
            fail(path, "expected an object");
        auto it = obj.find(key);
        if (it == obj.end())
            fail(path + "." + key, "missing field");
        return *it;
    }

    static long integer(const json& v, const std::string& path)
    {
        if (!v.is_number_integer())
            fail(path, "expected an integer");
        return v.get<long>();
    }

    static std::string string(const json& v, const std::string& path)
    {
        if (!v.is_string())
            fail(path, "expected a string");
        return v.get<std::string>();
    }

    static const json& array(const json& v, const std::string& path)
    {
        if (!v.is_array())
            fail(path, "expected an array");
        return v;
    }

    Vector vector(const json& v, const std::string& path, std::size_t expected) const
    {
        std::istringstream in(string(v, path));
        Vector out;
        std::string tok;
        while (in >> tok) {
            try {
                out.push_back(ring_.parse_scalar(tok));
            } catch (const Error& e) {
                fail(path, e.what());
            }
        }
        if (out.size() != expected)
            fail(path, fmt::format("expected {} entries, found {}", expected, out.size()));
        return out;
    }

    Matrix matrix(const json& v, const std::string& path, std::size_t rows, std::size_t cols) const
    {
        array(v, path);
        if (v.size() != rows)
            fail(path, fmt::format("block shape mismatch: expected {} rows, found {}", rows, v.size()));
        Matrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            Vector row = vector(v[r], fmt::format("{}[{}]", path, r), cols);
            for (std::size_t c = 0; c < cols; ++c)
                m(r, c) = row[c];
        }
        return m;
    }

    Operad operad(const json& v, const std::string& path) const
    {
        if (v.contains("builtin")) {
            std::string name = string(field(v, path, "builtin"), path + ".builtin");
            int cap = int(integer(field(v, path, "arity_cap"), path + ".arity_cap"));
            try {
                return builtin_operad(name, ring_, cap);
            } catch (const Error& e) {
                fail(path, e.what());
            }
        }
        int cap = int(integer(field(v, path, "arity_cap"), path + ".arity_cap"));
        if (cap < 1 || cap > 6)
            fail(path + ".arity_cap", "arity cap must be in 1..6");
        Operad o(ring_, cap, string(field(v, path, "name"), path + ".name"));
        const json& comps = array(field(v, path, "components"), path + ".components");
        if (comps.size() != std::size_t(cap))
            fail(path + ".components", fmt::format("expected {} components", cap));
        for (std::size_t k = 0; k < comps.size(); ++k) {
            std::string cp = fmt::format("{}.components[{}]", path, k);
            int n = int(integer(field(comps[k], cp, "arity"), cp + ".arity"));
            if (n != int(k) + 1)
                fail(cp + ".arity", "components must be listed by arity 1, 2, ...");
            std::vector<std::string> labels;
            for (const auto& l : array(field(comps[k], cp, "labels"), cp + ".labels"))
                labels.push_back(string(l, cp + ".labels"));
            std::vector<long> degrees;
            for (const auto& d : array(field(comps[k], cp, "degrees"), cp + ".degrees"))
                degrees.push_back(integer(d, cp + ".degrees"));
            if (degrees.size() != labels.size())
                fail(cp + ".degrees", "one degree per label");
            std::size_t r = labels.size();
            o.set_component(n, labels, degrees);
            o.component(n).delta = matrix(field(comps[k], cp, "delta"), cp + ".delta", r, r);
            const json& ts = array(field(comps[k], cp, "transpositions"), cp + ".transpositions");
            if (ts.size() != std::size_t(n - 1))
                fail(cp + ".transpositions", fmt::format("expected {} matrices", n - 1));
            for (std::size_t a = 0; a < ts.size(); ++a)
                o.component(n).transpositions[a] = matrix(ts[a], fmt::format("{}.transpositions[{}]", cp, a), r, r);
        }
        const json& cs = array(field(v, path, "compositions"), path + ".compositions");
        for (std::size_t k = 0; k < cs.size(); ++k) {
            std::string cp = fmt::format("{}.compositions[{}]", path, k);
            int m = int(integer(field(cs[k], cp, "m"), cp + ".m"));
            int n = int(integer(field(cs[k], cp, "n"), cp + ".n"));
            int i = int(integer(field(cs[k], cp, "i"), cp + ".i"));
            if (m < 1 || n < 1 || i < 1 || i > m || m + n - 1 > cap)
                fail(cp, "composition index out of range");
            o.compositions[{m, n, i}] = matrix(field(cs[k], cp, "matrix"), cp + ".matrix", o.rank(m + n - 1), o.rank(m) * o.rank(n));
        }
        for (int m = 1; m <= cap; ++m)
            for (int n = 1; m + n - 1 <= cap; ++n)
                for (int i = 1; i <= m; ++i)
                    if (!o.compositions.count({m, n, i}))
                        o.compositions[{m, n, i}] = Matrix(o.rank(m + n - 1), o.rank(m) * o.rank(n));
        o.unit = vector(field(v, path, "unit"), path + ".unit", o.rank(1));
        return o;
    }

    BigradedModule module(const json& v, const std::string& path) const
    {
        BigradedModule m(ring_);
        array(v, path);
        for (std::size_t k = 0; k < v.size(); ++k) {
            std::string cp = fmt::format("{}[{}]", path, k);
            Bidegree b{integer(field(v[k], cp, "p"), cp + ".p"), integer(field(v[k], cp, "q"), cp + ".q")};
            if (m.contains(b))
                fail(cp, "duplicate component " + b.str());
            Component c;
            std::set<std::string> seen;
            for (const auto& l : array(field(v[k], cp, "labels"), cp + ".labels")) {
                c.labels.push_back(string(l, cp + ".labels"));
                if (!seen.insert(c.labels.back()).second)
                    fail(cp + ".labels", "duplicate label " + c.labels.back());
            }
            if (v[k].contains("orders")) {
                if (!ring_.is_integers())
                    fail(cp + ".orders", "torsion orders require the ring Z");
                for (const auto& o : array(v[k]["orders"], cp + ".orders")) {
                    Integer d;
                    std::string s = string(o, cp + ".orders");
                    if (d.set_str(s, 10) != 0 || d < 0 || d == 1)
                        fail(cp + ".orders", "order must be 0 or at least 2, found " + s);
                    c.orders.push_back(d);
                }
                if (c.orders.size() != c.labels.size())
                    fail(cp + ".orders", "one order per label");
            }
            m.set(b, std::move(c));
        }
        return m;
    }

    GradedMap blocks(const json& v, const std::string& path, Bidegree shift, const BigradedModule& src, const BigradedModule& tgt) const
    {
        GradedMap f{shift, {}};
        array(v, path);
        for (std::size_t k = 0; k < v.size(); ++k) {
            std::string cp = fmt::format("{}[{}]", path, k);
            const json& s = array(field(v[k], cp, "source"), cp + ".source");
            if (s.size() != 2)
                fail(cp + ".source", "expected [p, q]");
            Bidegree b{integer(s[0], cp + ".source"), integer(s[1], cp + ".source")};
            if (!src.contains(b))
                fail(cp + ".source", "no source component at " + b.str());
            if (!tgt.contains(b + shift))
                fail(cp + ".source", "no target component at " + (b + shift).str());
            if (f.blocks.count(b))
                fail(cp, "duplicate block at " + b.str());
            f.blocks[b] = matrix(field(v[k], cp, "matrix"), cp + ".matrix", tgt.rank(b + shift), src.rank(b));
        }
        return f;
    }

    OperadAlgebra algebra(const json& v, const std::string& path, const Operad& o) const
    {
        OperadAlgebra a;
        a.operad = o;
        BigradedModule m = module(field(v, path, "components"), path + ".components");
        GradedMap d = blocks(field(v, path, "d"), path + ".d", {0, -1}, m, m);
        a.carrier = {m, d};
        if (v.contains("clamp_p"))
            a.clamp_p = integer(v["clamp_p"], path + ".clamp_p");
        const json& g = array(field(v, path, "gamma"), path + ".gamma");
        for (std::size_t k = 0; k < g.size(); ++k) {
            std::string cp = fmt::format("{}.gamma[{}]", path, k);
            const json& ins = array(field(g[k], cp, "inputs"), cp + ".inputs");
            int arity = int(ins.size());
            if (arity < 1 || arity > o.arity_cap)
                fail(cp + ".inputs", fmt::format("arity {} outside 1..{}", arity, o.arity_cap));
            std::string label = string(field(g[k], cp, "op"), cp + ".op");
            const auto& labels = o.component(arity).labels;
            auto it = std::find(labels.begin(), labels.end(), label);
            if (it == labels.end())
                fail(cp + ".op", fmt::format("no operation '{}' in arity {}", label, arity));
            std::vector<Generator> gs;
            std::vector<Bidegree> bs;
            for (std::size_t s = 0; s < ins.size(); ++s) {
                std::string ip = fmt::format("{}.inputs[{}]", cp, s);
                const json& x = array(ins[s], ip);
                if (x.size() != 3)
                    fail(ip, "expected [label, p, q]");
                Bidegree b{integer(x[1], ip), integer(x[2], ip)};
                const Component* c = m.find(b);
                std::string xl = string(x[0], ip);
                if (!c)
                    fail(ip, "no component at " + b.str());
                auto lt = std::find(c->labels.begin(), c->labels.end(), xl);
                if (lt == c->labels.end())
                    fail(ip, fmt::format("unknown label '{}' at {}", xl, b.str()));
                gs.push_back({b, std::size_t(lt - c->labels.begin())});
                bs.push_back(b);
            }
            std::size_t op = std::size_t(it - labels.begin());
            Bidegree out = a.output_bidegree(o.component(arity).degrees[op], bs);
            if (m.rank(out) == 0)
                fail(cp, "output bidegree " + out.str() + " is outside the carrier");
            GammaKey key{arity, op, gs};
            if (a.gamma.count(key))
                fail(cp, "duplicate table entry");
            a.set(arity, op, gs, vector(field(g[k], cp, "value"), cp + ".value", m.rank(out)));
        }
        return a;
    }

private:
    Ring ring_;
};

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col > 1 ? col - 1 : 1};
}

} // namespace

std::string serialize_tower(const AlgebraTower& t)
{
    if (!same_operad(t.A.operad, t.C.operad))
        throw Error(Errc::invalid_argument, "A and C must act through the same operad to be serialized");
    json doc{{"format", kFormat},
             {"version", kVersion},
             {"ring", t.ring().name()},
             {"window", {{"p_min", t.p_min}, {"p_max", t.p_max}}},
             {"policy", policy_name(t.policy)},
             {"operad", operad_json(t.A.operad)},
             {"A", algebra_json(t.A)},
             {"C", algebra_json(t.C)},
             {"i", blocks_json(t.ring(), t.i)},
             {"j", blocks_json(t.ring(), t.j)}};
    return doc.dump(2) + "\n";
}

AlgebraTower parse_tower(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_column(text, e.byte);
        std::string msg = e.what();
        auto pos = msg.find("syntax error");
        throw DocumentError("", line, col, pos == std::string::npos ? msg : msg.substr(pos));
    }
    if (!doc.is_object())
        Reader::fail("", "expected an object at the top level");
    if (Reader::string(Reader::field(doc, "", "format"), "format") != kFormat)
        Reader::fail("format", std::string("expected \"") + kFormat + "\"");
    if (Reader::integer(Reader::field(doc, "", "version"), "version") != kVersion)
        Reader::fail("version", fmt::format("unsupported version, expected {}", kVersion));
    Ring ring = Ring::rationals();
    try {
        ring = Ring::parse(Reader::string(Reader::field(doc, "", "ring"), "ring"));
    } catch (const Error& e) {
        Reader::fail("ring", e.what());
    }
    Reader rd(ring);
    AlgebraTower t;
    const json& w = Reader::field(doc, "", "window");
    t.p_min = Reader::integer(Reader::field(w, "window", "p_min"), "window.p_min");
    t.p_max = Reader::integer(Reader::field(w, "window", "p_max"), "window.p_max");
    if (t.p_max < t.p_min)
        Reader::fail("window", "p_max < p_min");
    std::string policy = Reader::string(Reader::field(doc, "", "policy"), "policy");
    if (policy == "constant_above")
        t.policy = ExtensionPolicy::constant_above;
    else if (policy == "repeat_last_map")
        t.policy = ExtensionPolicy::repeat_last_map;
    else
        Reader::fail("policy", "expected constant_above or repeat_last_map");
    Operad o = rd.operad(Reader::field(doc, "", "operad"), "operad");
    t.A = rd.algebra(Reader::field(doc, "", "A"), "A", o);
    t.C = rd.algebra(Reader::field(doc, "", "C"), "C", o);
    for (const auto* mod : {&t.A.carrier.module, &t.C.carrier.module})
        for (const auto& [b, c] : mod->components())
            if (b.p < t.p_min || b.p > t.p_max)
                Reader::fail(mod == &t.A.carrier.module ? "A.components" : "C.components", "component " + b.str() + " outside the window");
    t.i = rd.blocks(Reader::field(doc, "", "i"), "i", {1, 0}, t.A.carrier.module, t.A.carrier.module);
    t.j = rd.blocks(Reader::field(doc, "", "j"), "j", {0, 0}, t.A.carrier.module, t.C.carrier.module);
    return t;
}

AlgebraTower read_tower_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DocumentError(path, 0, 0, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_tower(ss.str());
}

} // namespace opseq
