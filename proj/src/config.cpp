#include "signreg/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "signreg/errors.hpp"

namespace signreg {

namespace {

struct Tokenizer {
    std::vector<std::string> tokens;
    int line = 0;

    double number(std::size_t i, const char* what) const {
        if (i >= tokens.size()) throw ParseError(std::string("missing ") + what, line, 0);
        const std::string& t = tokens[i];
        try {
            std::size_t pos = 0;
            double v = std::stod(t, &pos);
            if (pos != t.size()) throw std::invalid_argument(t);
            return v;
        } catch (const std::exception&) {
            throw ParseError("expected a number for " + std::string(what) + ", got '" + t + "'",
                             line, static_cast<int>(i + 1));
        }
    }
    long integer(std::size_t i, const char* what) const {
        double v = number(i, what);
        long r = static_cast<long>(std::llround(v));
        if (static_cast<double>(r) != v)
            throw ParseError(std::string(what) + " must be an integer", line,
                             static_cast<int>(i + 1));
        return r;
    }
};

std::vector<double> numbers_from(const Tokenizer& tk, std::size_t start, const char* what) {
    std::vector<double> v;
    for (std::size_t i = start; i < tk.tokens.size(); ++i) v.push_back(tk.number(i, what));
    return v;
}

class ConfigParser {
public:
    ParsedConfig parse(const std::string& text) {
        std::istringstream in(text);
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            std::string line = raw.substr(0, raw.find('#'));
            Tokenizer tk;
            tk.line = line_no;
            std::istringstream ls(line);
            std::string tok;
            while (ls >> tok) tk.tokens.push_back(tok);
            if (tk.tokens.empty()) continue;
            if (tk.tokens[0].front() == '[') {
                enter_section(tk);
                continue;
            }
            dispatch(tk);
        }
        finish_polys();
        ParsedConfig out;
        out.problem.p = p_ ? *p_ : ScalarCoefficient::constant(1.0);
        out.problem.q = q_;
        out.problem.h = h_;
        out.problem.subspace = subspace_;
        out.problem = validated(out.problem);
        out.options = options_;
        return out;
    }

private:
    enum class Section { None, P, Q, H, Subspace, Options, Residuals };

    void enter_section(const Tokenizer& tk) {
        if (tk.tokens.size() != 1)
            throw ParseError("unexpected tokens after section header", tk.line, 2);
        const std::string& s = tk.tokens[0];
        if (s == "[p]") section_ = Section::P;
        else if (s == "[q]") section_ = Section::Q;
        else if (s == "[h]") section_ = Section::H;
        else if (s == "[subspace]") section_ = Section::Subspace;
        else if (s == "[options]") section_ = Section::Options;
        else if (s == "[residuals]") section_ = Section::Residuals;
        else throw ParseError("unknown section " + s, tk.line, 1);
    }

    ScalarCoefficient scalar_from(const Tokenizer& tk, std::size_t at) {
        const std::string& kind = tk.tokens.at(at);
        if (kind == "constant") {
            if (tk.tokens.size() != at + 2)
                throw ParseError("constant takes exactly one value", tk.line,
                                 static_cast<int>(at + 2));
            return ScalarCoefficient::constant(tk.number(at + 1, "constant value"));
        }
        if (kind == "sampled") {
            std::vector<double> nums = numbers_from(tk, at + 1, "sample");
            if (nums.size() < 4 || nums.size() % 2 != 0)
                throw ParseError("sampled needs pairs: x0 v0 x1 v1 ...", tk.line,
                                 static_cast<int>(at + 1));
            std::vector<double> x, v;
            for (std::size_t i = 0; i < nums.size(); i += 2) {
                x.push_back(nums[i]);
                v.push_back(nums[i + 1]);
            }
            return ScalarCoefficient::sampled(std::move(x), std::move(v));
        }
        throw ParseError("unknown coefficient kind '" + kind + "'", tk.line,
                         static_cast<int>(at + 1));
    }

    void poly_piece(const Tokenizer& tk) {
        std::vector<double> nums = numbers_from(tk, 1, "poly piece");
        if (nums.size() < 3)
            throw ParseError("poly needs: a b c0 [c1 ...]", tk.line, 2);
        poly_breaks_.push_back(nums[0]);
        poly_breaks_.push_back(nums[1]);
        poly_pieces_.emplace_back(std::vector<double>(nums.begin() + 2, nums.end()));
    }

    void finish_polys() {
        if (poly_pieces_.empty()) return;
        std::vector<double> breaks;
        breaks.push_back(poly_breaks_[0]);
        for (std::size_t i = 0; i < poly_pieces_.size(); ++i) {
            if (poly_breaks_[2 * i] != breaks.back())
                throw ParseError("poly pieces must tile [0,1] in order", 0, 0);
            breaks.push_back(poly_breaks_[2 * i + 1]);
        }
        p_ = ScalarCoefficient::piecewise(PiecewisePoly(std::move(breaks), poly_pieces_));
    }

    void dispatch(const Tokenizer& tk) {
        const std::string& key = tk.tokens[0];
        switch (section_) {
            case Section::P:
                if (key == "poly") { poly_piece(tk); return; }
                p_ = scalar_from(tk, 0);
                return;
            case Section::Q:
            case Section::H: {
                GeneralizedCoefficient& g = section_ == Section::Q ? q_ : h_;
                if (key == "smooth") {
                    g.smooth = scalar_from(tk, 1);
                } else if (key == "atom") {
                    if (tk.tokens.size() != 4)
                        throw ParseError("atom takes: location weight order", tk.line, 2);
                    AtomicTerm a;
                    a.location = tk.number(1, "atom location");
                    a.weight = tk.number(2, "atom weight");
                    a.order = static_cast<int>(tk.integer(3, "atom order"));
                    if (a.order != 0 && a.order != 1)
                        throw IllegalAtomOrder("atom order must be 0 or 1");
                    g.atoms.push_back(a);
                } else {
                    throw ParseError("unknown key '" + key + "' in coefficient section",
                                     tk.line, 1);
                }
                return;
            }
            case Section::Subspace: {
                if (key == "clamp") {
                    int e = static_cast<int>(tk.integer(1, "endpoint"));
                    auto c = SubspaceSpec::clamped(e);
                    for (auto& f : c.functionals) subspace_.functionals.push_back(f);
                } else if (key == "value") {
                    subspace_.functionals.push_back(
                        {static_cast<int>(tk.integer(1, "endpoint")), 1.0, 0.0});
                } else if (key == "slope") {
                    subspace_.functionals.push_back(
                        {static_cast<int>(tk.integer(1, "endpoint")), 0.0, 1.0});
                } else if (key == "functional") {
                    if (tk.tokens.size() != 4)
                        throw ParseError("functional takes: endpoint a b", tk.line, 2);
                    subspace_.functionals.push_back({static_cast<int>(tk.integer(1, "endpoint")),
                                                     tk.number(2, "a"), tk.number(3, "b")});
                } else {
                    throw ParseError("unknown key '" + key + "' in [subspace]", tk.line, 1);
                }
                return;
            }
            case Section::Options: {
                if (tk.tokens.size() != 2 && key != "out")
                    throw ParseError("option takes exactly one value", tk.line, 2);
                if (key == "mesh") options_.mesh = static_cast<int>(tk.integer(1, "mesh"));
                else if (key == "grid") options_.grid = static_cast<int>(tk.integer(1, "grid"));
                else if (key == "seeds") options_.seeds = static_cast<int>(tk.integer(1, "seeds"));
                else if (key == "nmax") options_.nmax = static_cast<int>(tk.integer(1, "nmax"));
                else if (key == "order") options_.order = static_cast<int>(tk.integer(1, "order"));
                else if (key == "eps") options_.eps = tk.number(1, "eps");
                else if (key == "levels") options_.levels = static_cast<int>(tk.integer(1, "levels"));
                else if (key == "seed") options_.seed = static_cast<std::uint64_t>(tk.integer(1, "seed"));
                else if (key == "boundary_margin") options_.boundary_margin = tk.number(1, "boundary_margin");
                else if (key == "out") options_.out = tk.tokens.size() > 1 ? tk.tokens[1] : "";
                else throw ParseError("unknown option '" + key + "'", tk.line, 1);
                return;
            }
            case Section::Residuals: {
                if (key != "residual")
                    throw ParseError("unknown key '" + key + "' in [residuals]", tk.line, 1);
                if (tk.tokens.size() < 2 + 4 || (tk.tokens.size() - 2) % 4 != 0)
                    throw ParseError("residual takes: name then groups of coeff order point side",
                                     tk.line, 2);
                ResidualSpec spec;
                spec.name = tk.tokens[1];
                for (std::size_t i = 2; i < tk.tokens.size(); i += 4) {
                    ResidualTerm t;
                    t.coeff = tk.number(i, "residual coeff");
                    t.order = static_cast<int>(tk.integer(i + 1, "residual order"));
                    t.point = tk.number(i + 2, "residual point");
                    const std::string& s = tk.tokens[i + 3];
                    if (s == "L") t.side = Side::Left;
                    else if (s == "R" || s == "C") t.side = Side::Right;
                    else throw ParseError("residual side must be L, R or C", tk.line,
                                          static_cast<int>(i + 4));
                    spec.terms.push_back(t);
                }
                options_.residuals.push_back(std::move(spec));
                return;
            }
            case Section::None:
                throw ParseError("content before any section header", tk.line, 1);
        }
    }

    Section section_ = Section::None;
    std::optional<ScalarCoefficient> p_;
    std::vector<double> poly_breaks_;
    std::vector<Poly> poly_pieces_;
    GeneralizedCoefficient q_, h_;
    SubspaceSpec subspace_;
    RunConfig options_;
};

void echo_scalar(std::ostringstream& os, const ScalarCoefficient& c) {
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    switch (c.kind()) {
        case CoeffKind::Constant: os << "constant " << num(c.constant_value()) << "\n"; break;
        case CoeffKind::Sampled: {
            os << "sampled";
            for (std::size_t i = 0; i < c.sample_points().size(); ++i)
                os << " " << num(c.sample_points()[i]) << " " << num(c.sample_values()[i]);
            os << "\n";
            break;
        }
        case CoeffKind::PiecewisePolynomial: {
            const auto& pp = c.as_piecewise();
            for (std::size_t i = 0; i < pp.pieces().size(); ++i) {
                os << "poly " << num(pp.breaks()[i]) << " " << num(pp.breaks()[i + 1]);
                for (double v : pp.pieces()[i].coeffs()) os << " " << num(v);
                os << "\n";
            }
            break;
        }
    }
}

void echo_generalized(std::ostringstream& os, const GeneralizedCoefficient& g) {
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    if (g.smooth) {
        os << "smooth ";
        echo_scalar(os, *g.smooth);
    }
    for (const AtomicTerm& a : g.atoms)
        os << "atom " << num(a.location) << " " << num(a.weight) << " " << a.order << "\n";
}

}  // namespace

ParsedConfig parse_config(const std::string& text) { return ConfigParser{}.parse(text); }

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_echo(const Problem& problem) {
    std::ostringstream os;
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "[p]\n";
    echo_scalar(os, problem.p);
    os << "\n[q]\n";
    echo_generalized(os, problem.q);
    os << "\n[h]\n";
    echo_generalized(os, problem.h);
    os << "\n[subspace]\n";
    for (const auto& f : problem.subspace.functionals)
        os << "functional " << f.endpoint << " " << num(f.a) << " " << num(f.b) << "\n";
    return os.str();
}

}  // namespace signreg
