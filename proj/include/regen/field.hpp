#pragma once

// Arithmetic in small finite fields GF(q): prime fields GF(p) for prime
// p <= 65536 and binary extensions GF(2^m) for m = 1..16 with a fixed table
// of reduction polynomials. Multiplication and inversion go through log /
// antilog tables built once per field, so both are O(1) after construction.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "regen/errors.hpp"

namespace regen {

enum class FieldKind { Prime, BinaryExt };

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
public:
    static constexpr uint32_t kMaxOrder = 65536;

    FieldKind kind() const { return kind_; }
    uint32_t characteristic() const { return characteristic_; }
    uint32_t degree() const { return degree_; }
    uint32_t reduction_poly() const { return poly_; }
    uint32_t order() const { return order_; }

    static FieldPtr prime(uint32_t p);
    static FieldPtr gf2(uint32_t m);

    // Parses "prime:<p>" or "gf2:<m>".
    static FieldPtr parse(std::string_view spec);

    // Smallest supported field (by order) with q >= min_order. Prime powers
    // p^m with odd p are not supported and are skipped.
    static FieldPtr with_order_at_least(uint32_t min_order);

    std::string to_string() const;

    bool same_as(const Field& other) const {
        return kind_ == other.kind_ && characteristic_ == other.characteristic_ &&
               degree_ == other.degree_ && poly_ == other.poly_;
    }

    uint32_t check(uint32_t v) const {
        if (v >= order_) throw ParamError("value " + std::to_string(v) + " out of range for " + to_string());
        return v;
    }

    uint32_t add(uint32_t a, uint32_t b) const {
        if (kind_ == FieldKind::BinaryExt) return a ^ b;
        uint32_t s = a + b;
        return s >= order_ ? s - order_ : s;
    }

    uint32_t neg(uint32_t a) const {
        if (kind_ == FieldKind::BinaryExt) return a;
        return a == 0 ? 0 : order_ - a;
    }

    uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }

    uint32_t mul(uint32_t a, uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];  // exp table is doubled, no mod needed
    }

    uint32_t inv(uint32_t a) const {
        if (a == 0) throw ParamError("inverse of zero in " + to_string());
        return exp_[order_ - 1 - log_[a]];
    }

    uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }

    uint32_t pow(uint32_t a, uint64_t e) const {
        uint32_t r = 1;
        uint32_t base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

private:
    Field(FieldKind kind, uint32_t characteristic, uint32_t degree, uint32_t poly);

    void build_tables();
    uint32_t raw_mul(uint32_t a, uint32_t b) const;  // table-free, used only during construction

    FieldKind kind_;
    uint32_t characteristic_;
    uint32_t degree_;
    uint32_t poly_;  // reduction polynomial bitmask, binary extensions only
    uint32_t order_;
    std::vector<uint32_t> log_;  // log_[a] for a in [1, q)
    std::vector<uint32_t> exp_;  // exp_[i] for i in [0, 2(q-1)), doubled
};

// A field element bound to its field. Cross-field operations throw.
class FieldElement {
public:
    FieldElement(uint32_t value, FieldPtr field) : value_(field->check(value)), field_(std::move(field)) {}

    uint32_t value() const { return value_; }
    const FieldPtr& field() const { return field_; }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        return {a.f(b).add(a.value_, b.value_), a.field_};
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
        return {a.f(b).sub(a.value_, b.value_), a.field_};
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        return {a.f(b).mul(a.value_, b.value_), a.field_};
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
        return {a.f(b).div(a.value_, b.value_), a.field_};
    }
    FieldElement operator-() const { return {field_->neg(value_), field_}; }
    FieldElement inv() const { return {field_->inv(value_), field_}; }
    FieldElement pow(uint64_t e) const { return {field_->pow(value_, e), field_}; }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        return a.field_->same_as(*b.field_) && a.value_ == b.value_;
    }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

private:
    const Field& f(const FieldElement& other) const {
        if (!field_->same_as(*other.field_))
            throw FieldMismatchError("operands from different fields: " + field_->to_string() + " vs " +
                                     other.field_->to_string());
        return *field_;
    }

    uint32_t value_;
    FieldPtr field_;
};

inline FieldElement element_from_int(uint32_t value, FieldPtr field) { return {value, std::move(field)}; }

namespace detail {

inline bool is_prime(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Reduction polynomials for GF(2^m), m = 1..16. Bit i is the coefficient of
// x^i; the x^m bit is included. All entries are primitive, so x generates
// the multiplicative group.
inline uint32_t gf2_reduction_poly(uint32_t m) {
    static constexpr uint32_t table[17] = {
        0,       0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x89,   0x11D,
        0x211,   0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
    };
    if (m < 1 || m > 16) throw ParamError("GF(2^m) supported only for m in 1..16");
    return table[m];
}

inline std::vector<uint32_t> prime_factors(uint32_t n) {
    std::vector<uint32_t> out;
    for (uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace detail

inline Field::Field(FieldKind kind, uint32_t characteristic, uint32_t degree, uint32_t poly)
    : kind_(kind), characteristic_(characteristic), degree_(degree), poly_(poly) {
    uint64_t q = 1;
    for (uint32_t i = 0; i < degree; ++i) q *= characteristic;
    if (q < 2 || q > kMaxOrder) throw ParamError("field order out of supported range [2, 65536]");
    order_ = static_cast<uint32_t>(q);
    build_tables();
}

inline uint32_t Field::raw_mul(uint32_t a, uint32_t b) const {
    if (kind_ == FieldKind::Prime) {
        return static_cast<uint32_t>((uint64_t(a) * b) % order_);
    }
    // carry-less multiply, then reduce by the field polynomial
    uint64_t acc = 0;
    uint64_t x = a;
    while (b) {
        if (b & 1) acc ^= x;
        x <<= 1;
        b >>= 1;
    }
    for (int bit = 2 * int(degree_) - 2; bit >= int(degree_); --bit)
        if (acc >> bit & 1) acc ^= uint64_t(poly_) << (bit - degree_);
    return static_cast<uint32_t>(acc);
}

inline void Field::build_tables() {
    const uint32_t q = order_;
    log_.assign(q, 0);
    exp_.assign(2 * (q - 1) > 0 ? 2 * (q - 1) : 1, 1);
    if (q == 2) {
        log_[1] = 0;
        exp_[0] = 1;
        return;
    }

    auto try_generator = [&](uint32_t g) {
        uint32_t v = 1;
        for (uint32_t i = 0; i < q - 1; ++i) {
            exp_[i] = v;
            if (v != 1 && log_[v] != 0) return false;  // cycle shorter than q-1
            if (i > 0 && v == 1) return false;
            log_[v] = i;
            v = raw_mul(v, g);
        }
        return v == 1;  // g^(q-1) must close the cycle
    };

    bool found = false;
    if (kind_ == FieldKind::BinaryExt) {
        found = try_generator(2);  // table polynomials are primitive
    } else {
        auto factors = detail::prime_factors(q - 1);
        for (uint32_t g = 2; g < q && !found; ++g) {
            bool primitive = true;
            for (uint32_t f : factors) {
                // g^((q-1)/f) == 1 would mean ord(g) < q-1
                uint32_t v = 1;
                uint64_t e = (q - 1) / f;
                uint32_t base = g;
                while (e) {
                    if (e & 1) v = raw_mul(v, base);
                    base = raw_mul(base, base);
                    e >>= 1;
                }
                if (v == 1) {
                    primitive = false;
                    break;
                }
            }
            if (primitive) {
                log_.assign(q, 0);
                found = try_generator(g);
            }
        }
    }
    if (!found) throw ParamError("no multiplicative generator found; field spec is invalid");
    for (uint32_t i = 0; i < q - 1; ++i) exp_[i + q - 1] = exp_[i];
}

inline FieldPtr Field::prime(uint32_t p) {
    if (!detail::is_prime(p)) throw ParamError("characteristic " + std::to_string(p) + " is not prime");
    if (p > kMaxOrder) throw ParamError("prime field order exceeds 65536");
    return FieldPtr(new Field(FieldKind::Prime, p, 1, 0));
}

inline FieldPtr Field::gf2(uint32_t m) {
    uint32_t poly = detail::gf2_reduction_poly(m);
    return FieldPtr(new Field(FieldKind::BinaryExt, 2, m, poly));
}

inline FieldPtr Field::parse(std::string_view spec) {
    auto colon = spec.find(':');
    if (colon == std::string_view::npos) throw ParamError("field spec must be prime:<p> or gf2:<m>");
    std::string_view head = spec.substr(0, colon);
    std::string tail(spec.substr(colon + 1));
    uint32_t v = 0;
    try {
        size_t pos = 0;
        unsigned long parsed = std::stoul(tail, &pos);
        if (pos != tail.size() || parsed > kMaxOrder) throw ParamError("bad field parameter: " + tail);
        v = static_cast<uint32_t>(parsed);
    } catch (const std::logic_error&) {
        throw ParamError("bad field parameter: " + tail);
    }
    if (head == "prime") return prime(v);
    if (head == "gf2") return gf2(v);
    throw ParamError("unknown field kind: " + std::string(head));
}

inline FieldPtr Field::with_order_at_least(uint32_t min_order) {
    if (min_order < 2) min_order = 2;
    for (uint64_t q = min_order; q <= kMaxOrder; ++q) {
        if (detail::is_prime(static_cast<uint32_t>(q))) return prime(static_cast<uint32_t>(q));
        if ((q & (q - 1)) == 0) {
            uint32_t m = 0;
            for (uint64_t t = q; t > 1; t >>= 1) ++m;
            if (m >= 1 && m <= 16) return gf2(m);
        }
    }
    throw ParamError("no supported field with order >= " + std::to_string(min_order));
}

inline std::string Field::to_string() const {
    if (kind_ == FieldKind::Prime) return "prime:" + std::to_string(characteristic_);
    return "gf2:" + std::to_string(degree_);
}

}  // namespace regen
