#pragma once

// File and wire formats: the SCHWF001 wave-field container (8-byte magic,
// little-endian header length, JSON header, raw little-endian doubles
// interleaved re/im, y1-fastest), JSON encodings of observers, transitions
// and gauge maps, and a small ordered JSON writer that prints every number
// with 17 significant digits so reports are byte-stable across runs.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "schrod/fields.hpp"
#include "schrod/gauge.hpp"
#include "schrod/hj.hpp"
#include "schrod/spacetime.hpp"

namespace schrod {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- ordered JSON writer -------------------------------------------------------

inline std::string json_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class JsonValue {
public:
    static JsonValue null() { return JsonValue(); }
    static JsonValue boolean(bool b) {
        JsonValue v;
        v.kind_ = Kind::Boolean;
        v.text_ = b ? "true" : "false";
        return v;
    }
    static JsonValue integer(long long i) {
        JsonValue v;
        v.kind_ = Kind::Number;
        v.text_ = std::to_string(i);
        return v;
    }
    static JsonValue number(double d) {
        JsonValue v;
        v.kind_ = Kind::Number;
        v.text_ = json_double(d);
        return v;
    }
    static JsonValue string(std::string s) {
        JsonValue v;
        v.kind_ = Kind::String;
        v.text_ = std::move(s);
        return v;
    }
    static JsonValue array() {
        JsonValue v;
        v.kind_ = Kind::Array;
        return v;
    }
    static JsonValue object() {
        JsonValue v;
        v.kind_ = Kind::Object;
        return v;
    }

    static JsonValue number_array(const std::vector<double>& xs) {
        JsonValue v = array();
        for (double x : xs) v.push(number(x));
        return v;
    }
    static JsonValue integer_array(const std::vector<int>& xs) {
        JsonValue v = array();
        for (int x : xs) v.push(integer(x));
        return v;
    }

    JsonValue& push(JsonValue v) {
        items_.push_back({std::string(), std::move(v)});
        return *this;
    }
    JsonValue& set(const std::string& key, JsonValue v) {
        items_.push_back({key, std::move(v)});
        return *this;
    }

    std::string dump() const {
        std::string out;
        write(out);
        return out;
    }

private:
    enum class Kind { Null, Boolean, Number, String, Array, Object };

    static void escape(const std::string& s, std::string& out) {
        out += '"';
        for (char c : s) {
            switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
            }
        }
        out += '"';
    }

    void write(std::string& out) const {
        switch (kind_) {
        case Kind::Null: out += "null"; return;
        case Kind::Boolean:
        case Kind::Number: out += text_; return;
        case Kind::String: escape(text_, out); return;
        case Kind::Array:
            out += '[';
            for (std::size_t j = 0; j < items_.size(); ++j) {
                if (j) out += ',';
                items_[j].second.write(out);
            }
            out += ']';
            return;
        case Kind::Object:
            out += '{';
            for (std::size_t j = 0; j < items_.size(); ++j) {
                if (j) out += ',';
                escape(items_[j].first, out);
                out += ':';
                items_[j].second.write(out);
            }
            out += '}';
            return;
        }
    }

    Kind kind_ = Kind::Null;
    std::string text_;
    std::vector<std::pair<std::string, JsonValue>> items_;
};

// -- domain serialization --------------------------------------------------------

inline JsonValue observer_to_json(const Observer& o) {
    JsonValue v = JsonValue::object();
    v.set("n", JsonValue::integer(o.dim()));
    v.set("b", JsonValue::number_array(o.b));
    v.set("t0", JsonValue::number(o.t0));
    v.set("u", JsonValue::number_array(o.u));
    return v;
}

inline JsonValue transition_to_json(const GalileanTransition& g) {
    JsonValue v = JsonValue::object();
    v.set("n", JsonValue::integer(g.dim()));
    v.set("v", JsonValue::number_array(g.v));
    v.set("w", JsonValue::number_array(g.w));
    v.set("t0", JsonValue::number(g.t0));
    return v;
}

inline JsonValue gauge_map_to_json(const GaugeMap& m) {
    JsonValue v = JsonValue::object();
    v.set("g", transition_to_json(m.transition()));
    v.set("aux_v", JsonValue::number_array(m.aux_v()));
    v.set("m", JsonValue::number(m.constants().m));
    v.set("hbar", JsonValue::number(m.constants().hbar));
    return v;
}

inline JsonValue cocycle_report_to_json(const CocycleReport& r) {
    JsonValue v = JsonValue::object();
    v.set("mode", JsonValue::string(r.mode == CocycleMode::strict ? "strict" : "projective"));
    v.set("max_dev", JsonValue::number(r.max_dev()));
    v.set("phase_stddev", JsonValue::number(r.phase_stddev));
    v.set("samples", JsonValue::integer(r.samples));
    v.set("triples", JsonValue::integer(r.triples));
    v.set("max_ratio_offset", JsonValue::number(r.max_ratio_offset));
    return v;
}

inline JsonValue phase_point_to_json(const PhasePoint& pt) {
    JsonValue v = JsonValue::object();
    v.set("y", JsonValue::number_array(pt.y));
    v.set("t", JsonValue::number(pt.t));
    v.set("p", JsonValue::number_array(pt.p));
    v.set("h", JsonValue::number(pt.h));
    return v;
}

inline JsonValue hj_report_to_json(const HjReport& r) {
    JsonValue v = JsonValue::object();
    v.set("max_residual", JsonValue::number(r.max_residual));
    v.set("evaluated", JsonValue::integer(r.evaluated));
    v.set("skipped", JsonValue::integer(r.skipped));
    return v;
}

inline Vec vec_from_json(const nlohmann::json& j) {
    Vec out;
    for (const auto& x : j) out.push_back(x.get<double>());
    return out;
}

inline PhasePoint phase_point_from_json(const nlohmann::json& j) {
    PhasePoint pt;
    pt.y = vec_from_json(j.at("y"));
    pt.t = j.at("t").get<double>();
    pt.p = vec_from_json(j.at("p"));
    pt.h = j.at("h").get<double>();
    if (pt.y.size() != pt.p.size()) throw io_error("phase point: y/p length mismatch");
    return pt;
}

inline Observer observer_from_json(const nlohmann::json& j) {
    Observer o(vec_from_json(j.at("b")), j.at("t0").get<double>(), vec_from_json(j.at("u")));
    if (j.contains("n") && j.at("n").get<int>() != o.dim())
        throw io_error("observer: n does not match vector lengths");
    return o;
}

inline GalileanTransition transition_from_json(const nlohmann::json& j) {
    GalileanTransition g(vec_from_json(j.at("v")), vec_from_json(j.at("w")),
                         j.at("t0").get<double>());
    if (j.contains("n") && j.at("n").get<int>() != g.dim())
        throw io_error("transition: n does not match vector lengths");
    return g;
}

// -- SCHWF001 field container -----------------------------------------------------

inline constexpr char kFieldMagic[9] = "SCHWF001";

namespace detail {

inline void put_u32_le(std::string& out, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out += static_cast<char>((v >> (8 * k)) & 0xff);
}

inline void put_f64_le(std::string& out, double d) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(d);
    for (int k = 0; k < 8; ++k) out += static_cast<char>((bits >> (8 * k)) & 0xff);
}

inline std::uint32_t get_u32_le(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(p[k]) << (8 * k);
    return v;
}

inline double get_f64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(p[k]) << (8 * k);
    return std::bit_cast<double>(v);
}

} // namespace detail

inline std::string field_header_json(const WaveField& f) {
    JsonValue h = JsonValue::object();
    h.set("version", JsonValue::integer(1));
    h.set("n", JsonValue::integer(f.spec.n));
    h.set("sizes", JsonValue::integer_array(f.spec.sizes));
    h.set("extents", JsonValue::number_array(f.spec.extents));
    h.set("origins", JsonValue::number_array(f.spec.origins));
    h.set("t", JsonValue::number(f.t));
    h.set("frame", observer_to_json(f.frame));
    h.set("m", JsonValue::number(f.consts.m));
    h.set("hbar", JsonValue::number(f.consts.hbar));
    return h.dump();
}

inline std::string encode_field(const WaveField& f) {
    std::string out;
    out.reserve(16 + f.samples.size() * 16);
    out.append(kFieldMagic, 8);
    const std::string header = field_header_json(f);
    detail::put_u32_le(out, static_cast<std::uint32_t>(header.size()));
    out += header;
    for (const auto& z : f.samples) {
        detail::put_f64_le(out, z.real());
        detail::put_f64_le(out, z.imag());
    }
    return out;
}

inline WaveField decode_field(const std::string& bytes) {
    if (bytes.size() < 12 || std::memcmp(bytes.data(), kFieldMagic, 8) != 0)
        throw io_error("field: bad magic");
    const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint32_t header_len = detail::get_u32_le(raw + 8);
    if (bytes.size() < 12 + static_cast<std::size_t>(header_len))
        throw io_error("field: truncated header");
    nlohmann::json h;
    try {
        h = nlohmann::json::parse(bytes.substr(12, header_len));
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("field: malformed header: ") + e.what());
    }
    if (h.at("version").get<int>() != 1) throw io_error("field: unsupported version");

    std::vector<int> sizes;
    for (const auto& s : h.at("sizes")) sizes.push_back(s.get<int>());
    GridSpec spec(sizes, vec_from_json(h.at("extents")), vec_from_json(h.at("origins")));
    if (h.at("n").get<int>() != spec.n) throw io_error("field: n/sizes mismatch");

    WaveField f(spec, h.at("t").get<double>(), observer_from_json(h.at("frame")),
                PhysicalConstants(h.at("m").get<double>(), h.at("hbar").get<double>()));

    const std::size_t payload = 12 + header_len;
    const std::size_t need = f.samples.size() * 16;
    if (bytes.size() - payload != need) throw io_error("field: payload size mismatch");
    const auto* p = raw + payload;
    for (std::size_t j = 0; j < f.samples.size(); ++j) {
        const double re = detail::get_f64_le(p + 16 * j);
        const double im = detail::get_f64_le(p + 16 * j + 8);
        f.samples[j] = Complex(re, im);
    }
    return f;
}

inline void write_field(const WaveField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open for writing: " + path);
    const std::string bytes = encode_field(f);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("write failed: " + path);
}

inline WaveField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open for reading: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_field(bytes);
}

} // namespace schrod
