#include "lnag/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace lnag {

QuadField QuadField::make(const Int& D2)
{
    if (D2 <= 0) throw std::invalid_argument("QuadField: D2 must be positive");
    for (auto& [q, e] : factor(D2).terms)
        if (e > 1) throw std::invalid_argument("QuadField: D2 not squarefree");
    QuadField F;
    F.D2 = D2;
    Int m = -D2;
    mpz_fdiv_r_ui(m.get_mpz_t(), m.get_mpz_t(), 4);
    F.half = (m == 1);
    F.disc = F.half ? Int(-D2) : Int(-4 * D2);
    return F;
}

QuadInt QuadInt::from_omega(const QuadField& F, const Rat& x, const Rat& y)
{
    if (F.half) return {F.D2, x + y / 2, y / 2};
    return {F.D2, x, y};
}

std::pair<Rat, Rat> QuadInt::omega_coords(const QuadField& F) const
{
    if (F.half) {
        Rat y = 2 * v;
        return {u - v, y};
    }
    return {u, v};
}

bool QuadInt::is_integral(const QuadField& F) const
{
    auto [x, y] = omega_coords(F);
    return x.get_den() == 1 && y.get_den() == 1;
}

Int QuadInt::denominator(const QuadField& F) const
{
    auto [x, y] = omega_coords(F);
    return lcm(x.get_den(), y.get_den());
}

QuadInt QuadInt::operator/(const QuadInt& o) const
{
    Rat n = o.norm();
    if (n == 0) throw std::domain_error("QuadInt: division by zero");
    QuadInt r = (*this) * o.conj();
    return {D2, r.u / n, r.v / n};
}

QuadInt QuadInt::pow(unsigned long e) const
{
    QuadInt r(D2, 1, 0), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

std::string QuadInt::str(const QuadField& F) const
{
    auto [x, y] = omega_coords(F);
    Int n = denominator(F);
    Int X = Rat(x * n).get_num(), Y = Rat(y * n).get_num();
    std::ostringstream os;
    if (n != 1) os << "(";
    os << X.get_str();
    os << (Y < 0 ? " - " : " + ") << Int(abs(Y)).get_str() << "*w";
    if (n != 1) os << ")/" << n.get_str();
    return os.str();
}

namespace {

int delta(const Int& disc) { return mpz_odd_p(disc.get_mpz_t()) ? 1 : 0; }

Int fmod_pos(const Int& a, const Int& m)
{
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// element (X + Y sqrt(disc))/2
struct Elt { Int X, Y; };

Elt elt_mul(const Elt& p, const Elt& q, const Int& disc)
{
    Int X = p.X * q.X + disc * p.Y * q.Y, Y = p.X * q.Y + q.X * p.Y;
    return {X / 2, Y / 2};
}

std::vector<Elt> ideal_gens(const QfIdeal& I)
{
    return {{2 * I.content * I.a, 0}, {I.content * I.b, I.content}};
}

QfIdeal from_gens(const Int& disc, const std::vector<Elt>& gens)
{
    int d = delta(disc);
    Int A = 0, B = 0, C = 0;
    for (auto& g : gens) {
        Int x = (g.X - g.Y * d) / 2, y = g.Y;
        Int gg, s, t;
        mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), C.get_mpz_t(), y.get_mpz_t());
        if (gg == 0) {
            A = gcd(A, x);
            continue;
        }
        Int nb = s * B + t * x;
        Int rest = (C / gg) * x - (y / gg) * B;
        A = gcd(A, rest);
        B = nb;
        C = gg;
        if (A != 0) B = fmod_pos(B, A);
    }
    if (A == 0 || C == 0) throw std::invalid_argument("from_gens: degenerate lattice");
    if (A % C != 0 || B % C != 0) throw std::logic_error("from_gens: lattice is not an ideal");
    QfIdeal I;
    I.disc = disc;
    I.content = C;
    I.a = A / C;
    I.b = fmod_pos(2 * (B / C) + d, 2 * I.a);
    if ((I.b * I.b - disc) % (4 * I.a) != 0) throw std::logic_error("from_gens: not an ideal");
    return I;
}

Elt to_elt(const QuadField& F, const QuadInt& g)
{
    // X = 2u; Y = 2v (half) or v (disc = -4 D2)
    Rat X = 2 * g.u, Y = F.half ? Rat(2 * g.v) : g.v;
    if (X.get_den() != 1 || Y.get_den() != 1) throw std::invalid_argument("element not integral");
    return {X.get_num(), Y.get_num()};
}

QuadInt from_elt(const QuadField& F, const Int& X, const Int& Y)
{
    Rat u(X, 2);
    u.canonicalize();
    Rat v = F.half ? Rat(Y, 2) : Rat(Y);
    v.canonicalize();
    return {F.D2, u, v};
}

QuadInt sign_normalize(QuadInt g)
{
    if (g.u < 0 || (g.u == 0 && g.v < 0)) g = -g;
    return g;
}

}  // namespace

QfIdeal QfIdeal::conj() const
{
    QfIdeal J = *this;
    J.b = fmod_pos(-b, 2 * a);
    return J;
}

bool QfIdeal::contains(const Int& X, const Int& Y) const
{
    int d = delta(disc);
    if ((X - Y * d) % 2 != 0) return false;
    Int x = (X - Y * d) / 2;
    if (Y % content != 0 || x % content != 0) return false;
    Int k = Y / content, xx = x / content;
    Int B = (b - d) / 2;
    return (xx - k * B) % a == 0;
}

bool QfIdeal::operator<(const QfIdeal& o) const
{
    if (norm() != o.norm()) return norm() < o.norm();
    if (content != o.content) return content < o.content;
    if (a != o.a) return a < o.a;
    return b < o.b;
}

std::string QfIdeal::str() const
{
    std::ostringstream os;
    if (content != 1) os << content.get_str() << "*";
    os << "[" << a.get_str() << ", (" << b.get_str() << " + sqrt(" << disc.get_str() << "))/2]";
    return os.str();
}

QfIdeal unit_ideal(const QuadField& F)
{
    QfIdeal I;
    I.disc = F.disc;
    I.a = 1;
    I.b = delta(F.disc);
    return I;
}

QfIdeal principal_ideal(const QuadField& F, const QuadInt& g)
{
    Elt e = to_elt(F, g);
    Elt w{Int(delta(F.disc)), 1};  // omega = (delta + sqrt(disc))/2
    return from_gens(F.disc, {e, elt_mul(e, w, F.disc)});
}

QfIdeal ideal_mul(const QfIdeal& I, const QfIdeal& J)
{
    if (I.disc != J.disc) throw std::invalid_argument("ideal_mul: different fields");
    std::vector<Elt> gi = ideal_gens(I), gj = ideal_gens(J), out;
    for (auto& x : gi)
        for (auto& y : gj) out.push_back(elt_mul(x, y, I.disc));
    return from_gens(I.disc, out);
}

QfIdeal ideal_pow(const QfIdeal& I, unsigned long e)
{
    QfIdeal r;
    r.disc = I.disc;
    r.a = 1;
    r.b = delta(I.disc);
    QfIdeal b = I;
    while (e) {
        if (e & 1) r = ideal_mul(r, b);
        e >>= 1;
        if (e) b = ideal_mul(b, b);
    }
    return r;
}

Form reduce_form(Form f)
{
    Int disc = f.b * f.b - 4 * f.a * f.c;
    for (;;) {
        // b into (-a, a]
        Int r = fmod_pos(f.b + f.a - 1, 2 * f.a);
        f.b = r - f.a + 1;
        f.c = (f.b * f.b - disc) / (4 * f.a);
        if (f.a > f.c || (f.a == f.c && f.b < 0)) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        return f;
    }
}

Form ideal_class(const QfIdeal& I) { return reduce_form({I.a, I.b, I.form_c()}); }

bool ideal_is_principal(const QfIdeal& I) { return ideal_class(I).a == 1; }

std::optional<QuadInt> ideal_generator(const QuadField& F, const QfIdeal& I)
{
    Int disc = F.disc;
    QuadInt mu(F.D2, Rat(I.content), 0);
    Int a = I.a, b = I.b;
    for (;;) {
        Int twoa = 2 * a;
        Int r = fmod_pos(b + a - 1, twoa);
        b = r - a + 1;
        Int c = (b * b - disc) / (4 * a);
        if (a > c || (a == c && b < 0)) {
            // J = (beta / c) J',  beta = (b + sqrt(disc))/2
            QuadInt beta = from_elt(F, b, 1);
            mu = mu * beta * Rat(Int(1), c);
            a = c;
            b = -b;
            continue;
        }
        break;
    }
    if (a != 1) return std::nullopt;
    mu = sign_normalize(mu);
    if (mu.norm() != Rat(I.norm())) throw std::logic_error("ideal_generator: norm mismatch");
    return mu;
}

SearchOutcome ideal_generator_search(const QuadField& F, const QfIdeal& I, QuadInt& out,
                                     unsigned long max_steps)
{
    if (!ideal_is_principal(I)) return SearchOutcome::not_principal;
    Int N4 = 4 * I.norm(), ad = -F.disc;
    unsigned long steps = 0;
    for (Int Y = 0; ad * Y * Y <= N4; ++Y) {
        if (++steps > max_steps) return SearchOutcome::not_found;
        Int X2 = N4 - ad * Y * Y, X;
        if (!is_square(X2, &X)) continue;
        for (int s : {1, -1}) {
            Int XX = s * X;
            if (I.contains(XX, Y)) {
                out = sign_normalize(from_elt(F, XX, Y));
                return SearchOutcome::found;
            }
        }
    }
    return SearchOutcome::not_found;
}

std::vector<QfIdeal> primes_above(const QuadField& F, const Int& q)
{
    std::vector<QfIdeal> out;
    int d = delta(F.disc);
    if (kronecker(F.disc, q) == -1) {
        QfIdeal I = unit_ideal(F);
        I.content = q;
        out.push_back(I);
        return out;
    }
    for (Int b = 0; b < 2 * q; ++b) {
        if (mpz_odd_p(b.get_mpz_t()) != d) continue;
        if ((b * b - F.disc) % (4 * q) == 0) {
            QfIdeal I;
            I.disc = F.disc;
            I.a = q;
            I.b = b;
            out.push_back(I);
        }
    }
    return out;
}

std::pair<Int, Int> decompose(const Int& D)
{
    if (D == 0) throw std::invalid_argument("decompose: D = 0");
    if (D < 0 && is_square(-D)) throw std::invalid_argument("decompose: -D is a square");
    Int D1 = 1, D2 = D < 0 ? -1 : 1;
    for (auto& [q, e] : factor(D).terms) {
        D1 *= ipow(q, e / 2);
        if (e % 2) D2 *= q;
    }
    return {D1, D2};
}

std::vector<Form> reduced_forms(const Int& disc)
{
    if (disc >= 0) throw std::invalid_argument("reduced_forms: need negative discriminant");
    std::vector<Form> out;
    Int ad = -disc;
    for (Int a = 1; 3 * a * a <= ad; ++a) {
        for (Int b = -a + 1; b <= a; ++b) {
            if ((b * b - disc) % (4 * a) != 0) continue;
            Int c = (b * b - disc) / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (gcd(gcd(a, b), c) != 1) continue;
            out.push_back({a, b, c});
        }
    }
    return out;
}

long class_number(const QuadField& F)
{
    if (F.D2 > 1000000) throw std::invalid_argument("class_number: D2 above 10^6");
    return (long)reduced_forms(F.disc).size();
}

std::vector<QfIdeal> class_group_reps(const QuadField& F)
{
    long h = class_number(F);
    std::vector<QfIdeal> reps{unit_ideal(F)};
    std::vector<Form> seen{ideal_class(reps[0])};
    for (unsigned long q = 2; (long)reps.size() < h; q = next_prime_u64(q)) {
        if (kronecker(F.disc, Int(q)) == -1) continue;
        for (auto& P : primes_above(F, Int(q))) {
            Form f = ideal_class(P);
            if (std::find(seen.begin(), seen.end(), f) != seen.end()) continue;
            seen.push_back(f);
            reps.push_back(P);
        }
    }
    return reps;
}

std::vector<QfIdeal> compute_A_set(const QuadField& F, const Int& D, unsigned long p)
{
    if (p < 3) throw std::invalid_argument("compute_A_set: p < 3");
    auto [D1, D2] = decompose(D);
    (void)D2;
    std::vector<QfIdeal> out{unit_ideal(F)};
    for (auto& [q, e] : factor(2 * D).terms) {
        if (kronecker(F.disc, q) != 1) continue;  // inert/ramified exponents are forced to 0
        auto P = primes_above(F, q);
        unsigned v = valuation(q, 2 * D1);
        std::vector<QfIdeal> next;
        for (auto& A : out) {
            next.push_back(A);
            for (unsigned long e1 = 1; e1 < p; ++e1) {
                unsigned long e2 = p - e1;
                if (std::min(e1, e2) > v) continue;
                next.push_back(ideal_mul(A, ideal_mul(ideal_pow(P[0], e1), ideal_pow(P[1], e2))));
            }
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<QuadInt> compute_Gamma(const QuadField& F, const Int& D, unsigned long p)
{
    auto A = compute_A_set(F, D, p);
    auto reps = class_group_reps(F);
    std::vector<QuadInt> out;
    for (auto& a : A) {
        for (auto& b : reps) {
            QfIdeal J = ideal_mul(a, ideal_pow(b.conj(), p));
            if (!ideal_is_principal(J)) continue;
            auto g = ideal_generator(F, J);
            if (!g) throw std::runtime_error("compute_Gamma: no generator for " + J.str());
            QuadInt gamma = (*g) * Rat(Int(1), ipow(b.norm(), p));
            if (std::find(out.begin(), out.end(), gamma) == out.end()) out.push_back(gamma);
        }
    }
    if (F.D2 == 3 && p == 3) {
        QuadInt z(F.D2, Rat(1, 2), Rat(1, 2));
        size_t n = out.size();
        for (size_t i = 0; i < n; ++i) {
            out.push_back(out[i] * z);
            out.push_back(out[i] / z);
        }
    }
    return out;
}

KappaData kappa_data(const QuadField& F, const Int& D, const Int& d1)
{
    KappaData K;
    // d = 2 d1 exactly when 2 divides the gcd of x +- D1 sqrt(-D2), i.e. D2 = 7 mod 8
    (void)D;
    K.d = (fmod_pos(F.D2, 8) == 7) ? Int(2 * d1) : d1;
    auto fd = factor(K.d);
    if (fd.terms.size() != 1) throw std::runtime_error("kappa_data: d is not a prime power");
    K.q = fd.terms[0].first;
    K.c = fd.terms[0].second;
    if (kronecker(F.disc, K.q) != 1) throw std::runtime_error("kappa_data: q does not split");
    QfIdeal qbar = primes_above(F, K.q)[0];
    QfIdeal a = ideal_pow(qbar, K.c);
    QfIdeal ak = a;
    for (K.k0 = 1; !ideal_is_principal(ak); ++K.k0) ak = ideal_mul(ak, a);
    K.alpha0 = *ideal_generator(F, ak);
    if (K.k0 % 2) {
        K.k = K.k0;
        K.kappa = 2;
    } else {
        K.k = K.k0 / 2;
        K.kappa = 1;
    }
    K.alpha_height = K.k * std::log(K.d.get_d()) / K.kappa;
    K.gamma_height_coeff = K.k / 2.0;
    return K;
}

}  // namespace lnag
