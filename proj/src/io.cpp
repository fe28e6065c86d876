#include "brst/io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace brst {

std::string printPoly(const GradedPoly& p) {
    if (p.isZero()) return "0";
    std::ostringstream os;
    bool first = true;
    // descending canonical order
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const Monomial& m = it->first;
        Rat c = it->second;
        bool neg = c < 0;
        if (neg) c = -c;
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        bool needCoeff = (c != 1) || m.empty();
        if (needCoeff) os << c.get_str();
        bool needStar = needCoeff;
        for (const auto& f : m) {
            if (needStar) os << "*";
            needStar = true;
            os << p.cat()->info(f.var).name;
            if (f.exp > 1) os << "^" << f.exp;
        }
    }
    return os.str();
}

namespace {

struct Lexer {
    const std::string& s;
    size_t pos = 0;
    explicit Lexer(const std::string& str) : s(str) {}

    void skipWs() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skipWs();
        return pos >= s.size();
    }
    char peek() {
        skipWs();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool eat(char c) {
        skipWs();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    /// identifier, optionally followed by one [...] block (part of the name)
    std::string name() {
        skipWs();
        size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        if (pos < s.size() && s[pos] == '[') {
            while (pos < s.size() && s[pos] != ']') ++pos;
            if (pos < s.size()) ++pos;
        }
        return s.substr(start, pos - start);
    }
    std::string number() {
        skipWs();
        size_t start = pos;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/'))
            ++pos;
        return s.substr(start, pos - start);
    }
};

class PolyParser {
  public:
    PolyParser(const Catalog& cat, const std::string& text) : cat_(cat), lex_(text) {
        for (VarId v = 0; v < cat.size(); ++v) names_[cat.info(v).name] = v;
    }

    GradedPoly parse() {
        GradedPoly r = expr();
        if (!lex_.eof()) fail("trailing input");
        return r;
    }

  private:
    [[noreturn]] void fail(const std::string& what) {
        throw Error("polynomial syntax error at offset " + std::to_string(lex_.pos) + ": " + what);
    }

    GradedPoly expr() {
        GradedPoly r(&cat_);
        bool neg = false;
        if (lex_.eat('-')) neg = true;
        else (void)lex_.eat('+');
        GradedPoly t = term();
        r += neg ? -t : t;
        while (true) {
            if (lex_.eat('+')) r += term();
            else if (lex_.eat('-')) r -= term();
            else break;
        }
        return r;
    }

    GradedPoly term() {
        GradedPoly r = factor();
        while (lex_.eat('*')) r *= factor();
        return r;
    }

    GradedPoly factor() {
        char c = lex_.peek();
        if (c == '(') {
            lex_.eat('(');
            GradedPoly r = expr();
            if (!lex_.eat(')')) fail("expected ')'");
            return powerSuffix(std::move(r));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num = lex_.number();
            if (num.empty()) fail("expected number");
            return powerSuffix(GradedPoly::constant(&cat_, parseRat(num)));
        }
        std::string n = lex_.name();
        if (n.empty()) fail("expected variable or number");
        auto it = names_.find(n);
        if (it == names_.end()) fail("unknown variable '" + n + "'");
        return powerSuffix(GradedPoly::variable(&cat_, it->second));
    }

    GradedPoly powerSuffix(GradedPoly base) {
        if (!lex_.eat('^')) return base;
        std::string num = lex_.number();
        if (num.empty()) fail("expected exponent");
        long e = std::stol(num);
        if (e < 0) fail("negative exponent");
        GradedPoly r = GradedPoly::constant(base.cat(), 1);
        for (long i = 0; i < e; ++i) r *= base;
        return r;
    }

    const Catalog& cat_;
    Lexer lex_;
    std::map<std::string, VarId> names_;
};

std::vector<std::string> splitLines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) lines.push_back(l);
    return lines;
}

std::string stripComment(const std::string& line) {
    size_t h = line.find('#');
    std::string s = (h == std::string::npos) ? line : line.substr(0, h);
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

} // namespace

GradedPoly parsePoly(const Catalog& cat, const std::string& text) {
    return PolyParser(cat, text).parse();
}

LoadedTheory parseModelText(const std::string& text, bool validate) {
    auto lines = splitLines(text);

    // pass 1: sizes and declarations
    struct RawStage {
        std::vector<int> parity;
        std::vector<std::string> rows;
        int lineNo = 0;
    };
    std::vector<std::pair<std::string, std::string>> pairs;  // (p,q) names
    std::vector<int> pairParity;
    std::vector<std::string> constraintLines;
    std::vector<RawStage> rawStages;
    std::vector<std::tuple<int, std::string>> aLines;  // (k, line)
    std::vector<std::string> uLines, regLines, splitLines_;
    std::string section;
    int lineNo = 0;
    for (const std::string& raw : lines) {
        ++lineNo;
        std::string line = stripComment(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            size_t close = line.find(']');
            if (close == std::string::npos) throw Error("line " + std::to_string(lineNo) + ": unterminated section header");
            section = line.substr(1, close - 1);
            if (section.rfind("stage", 0) == 0) {
                rawStages.push_back(RawStage{});
                rawStages.back().lineNo = lineNo;
                section = "stage";
            }
            continue;
        }
        if (section == "phase_space") {
            auto tk = tokens(line);
            if (tk.size() < 3 || tk[0] != "pair")
                throw Error("line " + std::to_string(lineNo) + ": expected 'pair <p> <q> [parity]'");
            pairs.emplace_back(tk[1], tk[2]);
            pairParity.push_back(tk.size() > 3 ? std::stoi(tk[3]) : 0);
        } else if (section == "constraints") {
            constraintLines.push_back(line);
        } else if (section == "stage") {
            if (rawStages.empty()) throw Error("line " + std::to_string(lineNo) + ": stage row outside [stage]");
            auto tk = tokens(line);
            if (tk[0] == "parity") {
                for (size_t i = 1; i < tk.size(); ++i) rawStages.back().parity.push_back(std::stoi(tk[i]));
            } else if (tk[0] == "row") {
                rawStages.back().rows.push_back(line.substr(line.find("row") + 3));
            } else {
                throw Error("line " + std::to_string(lineNo) + ": expected 'row ...' or 'parity ...'");
            }
        } else if (section.rfind("a_functions", 0) == 0) {
            size_t kp = section.find("k=");
            if (kp == std::string::npos) throw Error("a_functions section needs k=<stage>");
            aLines.emplace_back(std::stoi(section.substr(kp + 2)), line);
        } else if (section == "structure") {
            uLines.push_back(line);
        } else if (section == "regularity") {
            regLines.push_back(line);
        } else if (section == "split") {
            splitLines_.push_back(line);
        } else if (section.empty()) {
            throw Error("line " + std::to_string(lineNo) + ": content before any section");
        } else {
            throw Error("line " + std::to_string(lineNo) + ": unknown section '" + section + "'");
        }
    }
    if (pairs.empty()) throw Error("model has no [phase_space] pairs");
    if (constraintLines.empty()) throw Error("model has no [constraints]");

    // stage sizes: columns of each Z row list
    std::vector<std::pair<int, std::vector<int>>> stageSizes;
    std::vector<std::vector<std::vector<std::string>>> stageRowPolys;
    for (auto& rs : rawStages) {
        std::vector<std::vector<std::string>> rows;
        size_t cols = 0;
        for (auto& rowLine : rs.rows) {
            std::vector<std::string> cells;
            std::string cur;
            std::istringstream in(rowLine);
            std::string piece;
            while (std::getline(in, piece, ',')) cells.push_back(piece);
            if (cols == 0) cols = cells.size();
            else if (cols != cells.size())
                throw Error("stage near line " + std::to_string(rs.lineNo) + ": ragged Z rows");
            rows.push_back(std::move(cells));
        }
        std::vector<int> par = rs.parity;
        par.resize(cols, 0);
        stageSizes.emplace_back(static_cast<int>(cols), par);
        stageRowPolys.push_back(std::move(rows));
    }

    std::vector<std::string> pN, qN;
    for (auto& [p, q] : pairs) {
        pN.push_back(p);
        qN.push_back(q);
    }

    // constraint parities deduced in pass 2; declare even placeholders now
    std::vector<int> tParity(constraintLines.size(), 0);

    LoadedTheory out;
    out.theory = std::make_unique<Theory>(static_cast<int>(pairs.size()), pairParity, pN, qN,
                                          static_cast<int>(constraintLines.size()), tParity,
                                          stageSizes);
    Theory& th = *out.theory;
    th.model.sourceText = text;

    for (size_t a = 0; a < constraintLines.size(); ++a) {
        GradedPoly T = parsePoly(th.cat, constraintLines[a]);
        auto p = T.parity();
        if (!p) throw Error("constraint " + std::to_string(a) + " is not parity-homogeneous");
        if (T.isZero()) throw Error("constraint " + std::to_string(a) + " is zero");
        th.model.T[a] = T;
        th.model.tParity[a] = *p;
    }
    for (size_t k = 0; k < stageRowPolys.size(); ++k) {
        Stage& st = th.model.stages[k];
        int expectRows = th.mk(static_cast<int>(k));
        if (static_cast<int>(stageRowPolys[k].size()) != expectRows)
            throw Error("stage " + std::to_string(k) + ": expected " + std::to_string(expectRows) +
                        " Z rows, got " + std::to_string(stageRowPolys[k].size()));
        for (int i = 0; i < expectRows; ++i)
            for (int j = 0; j < st.size; ++j)
                st.Z[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    parsePoly(th.cat, stageRowPolys[k][static_cast<size_t>(i)][static_cast<size_t>(j)]);
    }

    // A-functions: lines "b0 a0 a2 : poly", grouped by k
    std::map<int, AFunctions> afs;
    for (auto& [k, line] : aLines) {
        auto& af = afs[k];
        if (af.A.empty()) {
            af.k = k;
            af.A.assign(static_cast<size_t>(th.mk(0)),
                        std::vector<std::vector<GradedPoly>>(
                            static_cast<size_t>(th.mk(k)),
                            std::vector<GradedPoly>(static_cast<size_t>(th.mk(k + 2)), GradedPoly(&th.cat))));
        }
        size_t colon = line.find(':');
        if (colon == std::string::npos) throw Error("a_functions line needs 'b0 a0 a2 : poly'");
        auto idx = tokens(line.substr(0, colon));
        if (idx.size() != 3) throw Error("a_functions line needs three indices");
        int b0 = std::stoi(idx[0]), a0 = std::stoi(idx[1]), a2 = std::stoi(idx[2]);
        af.A.at(static_cast<size_t>(b0)).at(static_cast<size_t>(a0)).at(static_cast<size_t>(a2)) =
            parsePoly(th.cat, line.substr(colon + 1));
    }
    for (auto& [k, af] : afs) th.model.aFuns.push_back(af);

    if (!uLines.empty()) {
        int m0 = th.mk(0);
        std::vector<std::vector<std::vector<GradedPoly>>> U(
            static_cast<size_t>(m0),
            std::vector<std::vector<GradedPoly>>(static_cast<size_t>(m0),
                                                 std::vector<GradedPoly>(static_cast<size_t>(m0), GradedPoly(&th.cat))));
        for (auto& line : uLines) {
            size_t colon = line.find(':');
            if (colon == std::string::npos) throw Error("structure line needs 'g0 a0 b0 : poly'");
            auto idx = tokens(line.substr(0, colon));
            if (idx.size() != 3) throw Error("structure line needs three indices");
            U.at(static_cast<size_t>(std::stoi(idx[0])))
                .at(static_cast<size_t>(std::stoi(idx[1])))
                .at(static_cast<size_t>(std::stoi(idx[2]))) = parsePoly(th.cat, line.substr(colon + 1));
        }
        th.model.U = std::move(U);
    }

    for (auto& line : regLines) {
        auto tk = tokens(line);
        if (tk.empty()) continue;
        if (tk[0] == "F") {
            th.model.F.push_back(parsePoly(th.cat, line.substr(line.find('F') + 1)));
        } else if (tk[0] == "point") {
            for (size_t i = 1; i < tk.size(); ++i) {
                size_t eq = tk[i].find('=');
                if (eq == std::string::npos) throw Error("regularity point entries look like name=value");
                GradedPoly var = parsePoly(th.cat, tk[i].substr(0, eq));
                if (var.termCount() != 1) throw Error("regularity point name must be a variable");
                th.model.refPoint[var.support().front()] = parseRat(tk[i].substr(eq + 1));
            }
        } else {
            throw Error("regularity lines start with 'F' or 'point'");
        }
    }

    if (!splitLines_.empty()) {
        UserSplit us;
        us.A.resize(static_cast<size_t>(th.L()) + 1);
        us.aprime.resize(static_cast<size_t>(th.L()));
        us.Zinv.resize(static_cast<size_t>(th.L()) + 1);
        for (auto& line : splitLines_) {
            auto tk = tokens(line);
            if (tk.size() >= 3 && tk[0] == "A" && tk[2] == ":") {
                int k = std::stoi(tk[1]);
                for (size_t i = 3; i < tk.size(); ++i)
                    us.A.at(static_cast<size_t>(k)).push_back(std::stoi(tk[i]));
            } else if (tk.size() >= 3 && tk[0] == "aprime" && tk[2] == ":") {
                int k = std::stoi(tk[1]);
                for (size_t i = 3; i < tk.size(); ++i)
                    us.aprime.at(static_cast<size_t>(k)).push_back(std::stoi(tk[i]));
            } else if (tk.size() >= 3 && tk[0] == "zinv" && tk[2] == "row") {
                int k = std::stoi(tk[1]);
                std::string rest = line.substr(line.find("row") + 3);
                std::vector<GradedPoly> row;
                std::istringstream in(rest);
                std::string piece;
                while (std::getline(in, piece, ',')) row.push_back(parsePoly(th.cat, piece));
                us.Zinv.at(static_cast<size_t>(k)).push_back(std::move(row));
            } else {
                throw Error("split lines: 'A <k> : i...', 'aprime <k> : i...' or 'zinv <k> row p,...'");
            }
        }
        th.model.userSplit = std::move(us);
    }

    if (validate) {
        auto errs = th.validate();
        if (!errs.empty()) {
            std::string msg = "model validation failed:";
            for (auto& e : errs) msg += "\n  " + e;
            throw Error(msg);
        }
    }
    return out;
}

LoadedTheory parseModelFile(const std::string& path, bool validate) {
    return parseModelText(readFileOrThrow(path), validate);
}

namespace {

void writeTensor(std::ostream& os, const char* tag, const Sp2Tensor& x) {
    for (int t = 0; t <= x.rank(); ++t) {
        int r = x.rank() - t;
        os << tag << " " << r << " " << t << " = " << printPoly(x.at(r, t)) << "\n";
    }
}

} // namespace

std::string writeChargeArtifact(const Theory& th, const ChargeArtifact& art) {
    std::ostringstream os;
    os << "brst-charge-artifact v1\n";
    os << "[meta]\n";
    os << "cutoff " << art.cutoff << "\n";
    os << "seed " << art.seed << "\n";
    os << "residual_zero_to_cutoff " << (art.charge.residualZeroToCutoff ? "true" : "false") << "\n";
    os << "residual_zero_exact " << (art.charge.residualZeroExact ? "true" : "false") << "\n";
    os << "[model]\n<<<\n" << art.modelText;
    if (art.modelText.empty() || art.modelText.back() != '\n') os << "\n";
    os << ">>>\n";
    os << "[params]\n";
    for (int s = 1; s <= th.L(); ++s) {
        for (int a = 0; a < th.mk(s); ++a) {
            const Sp2Tensor& M = art.charge.params.Mred[static_cast<size_t>(s)][static_cast<size_t>(a)];
            const Sp2Tensor& N = art.charge.params.Nred[static_cast<size_t>(s)][static_cast<size_t>(a)];
            for (int t = 0; t <= M.rank(); ++t)
                os << "M " << s << " " << a << " " << (M.rank() - t) << " " << t << " = "
                   << printPoly(M.at(M.rank() - t, t)) << "\n";
            for (int t = 0; t <= N.rank(); ++t)
                os << "N " << s << " " << a << " " << (N.rank() - t) << " " << t << " = "
                   << printPoly(N.at(N.rank() - t, t)) << "\n";
        }
    }
    os << "[pi]\n";
    writeTensor(os, "PI", art.charge.pi);
    return os.str();
}

LoadedCharge readChargeArtifact(const std::string& text) {
    auto lines = splitLines(text);
    if (lines.empty() || lines[0] != "brst-charge-artifact v1")
        throw Error("not a charge artifact");
    std::string modelText;
    int cutoff = 3;
    uint64_t seed = 0;
    bool inModel = false;
    std::string section;
    std::vector<std::string> paramLines, piLines;
    for (size_t i = 1; i < lines.size(); ++i) {
        const std::string& raw = lines[i];
        if (inModel) {
            if (raw == ">>>") { inModel = false; continue; }
            modelText += raw;
            modelText += "\n";
            continue;
        }
        std::string line = stripComment(raw);
        if (line.empty()) continue;
        if (line == "<<<") { inModel = true; continue; }
        if (line.front() == '[') {
            section = line.substr(1, line.find(']') - 1);
            continue;
        }
        auto tk = tokens(line);
        if (section == "meta") {
            if (tk[0] == "cutoff") cutoff = std::stoi(tk[1]);
            else if (tk[0] == "seed") seed = std::stoull(tk[1]);
        } else if (section == "params") {
            paramLines.push_back(line);
        } else if (section == "pi") {
            piLines.push_back(line);
        }
    }

    LoadedCharge out;
    out.model = parseModelText(modelText);
    Theory& th = out.model.get();
    out.artifact.modelText = modelText;
    out.artifact.cutoff = cutoff;
    out.artifact.seed = seed;
    out.artifact.charge.params = Omega1Params::zeros(th);
    out.artifact.charge.pi = Sp2Tensor(&th.cat, 1);
    out.artifact.charge.cutoff = cutoff;

    for (auto& line : paramLines) {
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw Error("artifact params line missing '='");
        auto tk = tokens(line.substr(0, eq));
        if (tk.size() != 5) throw Error("artifact params line malformed");
        GradedPoly p = parsePoly(th.cat, line.substr(eq + 1));
        int s = std::stoi(tk[1]), a = std::stoi(tk[2]), r = std::stoi(tk[3]), t = std::stoi(tk[4]);
        if (tk[0] == "M")
            out.artifact.charge.params.Mred.at(static_cast<size_t>(s)).at(static_cast<size_t>(a)).at(r, t) = p;
        else if (tk[0] == "N")
            out.artifact.charge.params.Nred.at(static_cast<size_t>(s)).at(static_cast<size_t>(a)).at(r, t) = p;
        else
            throw Error("artifact params line must start with M or N");
    }
    for (auto& line : piLines) {
        size_t eq = line.find('=');
        auto tk = tokens(line.substr(0, eq));
        if (tk.size() != 3 || tk[0] != "PI") throw Error("artifact pi line malformed");
        int r = std::stoi(tk[1]), t = std::stoi(tk[2]);
        out.artifact.charge.pi.at(r, t) = parsePoly(th.cat, line.substr(eq + 1));
    }
    return out;
}

std::string writeLiftArtifact(const Theory& th, const LiftArtifact& art) {
    (void)th;
    std::ostringstream os;
    os << "brst-lift-artifact v1\n";
    os << "[meta]\n";
    os << "cutoff " << art.cutoff << "\n";
    os << "residual_zero_to_cutoff " << (art.residualZero ? "true" : "false") << "\n";
    os << "[model]\n<<<\n" << art.modelText;
    if (art.modelText.empty() || art.modelText.back() != '\n') os << "\n";
    os << ">>>\n";
    os << "[phi0]\n" << printPoly(art.phi0) << "\n";
    os << "[K]\n" << printPoly(art.K) << "\n";
    return os.str();
}

std::string readFileOrThrow(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void writeFileOrThrow(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

} // namespace brst
