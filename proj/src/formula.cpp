#include "absw/formula.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <random>
#include <sstream>

namespace absw {

namespace {

// ---------------------------------------------------------------------------
// Tokenizer

enum class Tok {
    Ident, Int,
    LParen, RParen, Comma, LBrace, RBrace,
    Eq, Le, Lt,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int value = 0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : src_(s) { advance(); }

    const Token& cur() const { return cur_; }

    void advance() {
        skipSpace();
        cur_.line = line_;
        cur_.col = col_;
        if (pos_ >= src_.size()) {
            cur_.kind = Tok::End;
            cur_.text.clear();
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                    src_[pos_] == '_' || src_[pos_] == '\''))
                bump();
            cur_.kind = Tok::Ident;
            cur_.text = src_.substr(start, pos_ - start);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                bump();
            cur_.kind = Tok::Int;
            cur_.text = src_.substr(start, pos_ - start);
            cur_.value = std::stoi(cur_.text);
            return;
        }
        switch (c) {
        case '(': bump(); cur_.kind = Tok::LParen; cur_.text = "("; return;
        case ')': bump(); cur_.kind = Tok::RParen; cur_.text = ")"; return;
        case ',': bump(); cur_.kind = Tok::Comma; cur_.text = ","; return;
        case '{': bump(); cur_.kind = Tok::LBrace; cur_.text = "{"; return;
        case '}': bump(); cur_.kind = Tok::RBrace; cur_.text = "}"; return;
        case '=': bump(); cur_.kind = Tok::Eq; cur_.text = "="; return;
        case '<':
            bump();
            if (pos_ < src_.size() && src_[pos_] == '=') {
                bump();
                cur_.kind = Tok::Le;
                cur_.text = "<=";
            } else {
                cur_.kind = Tok::Lt;
                cur_.text = "<";
            }
            return;
        default:
            throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
        }
    }

private:
    void bump() {
        if (src_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
        ++pos_;
    }
    void skipSpace() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            bump();
        // '#' comments run to end of line (used in shipped .sol files)
        if (pos_ < src_.size() && src_[pos_] == '#') {
            while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            skipSpace();
        }
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token cur_;
};

bool isKeyword(const std::string& s) {
    static const char* kw[] = {"forall", "exists", "and", "or", "implies", "iff", "not",
                               "in",     "card",   "abs", "empty", "universe", "omega",
                               "union",  "inter",  "minus", "E", "Cmp"};
    for (const char* k : kw)
        if (s == k) return true;
    return false;
}

bool isConceptName(const std::string& s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

// ---------------------------------------------------------------------------
// Parser (recursive descent; precedence iff < implies < or < and < not/quant)

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    FormulaPtr parse() {
        FormulaPtr f = parseIff();
        expect(Tok::End, "end of input");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& expected) {
        throw ParseError(lex_.cur().line, lex_.cur().col, expected);
    }
    bool atIdent(const char* word) {
        return lex_.cur().kind == Tok::Ident && lex_.cur().text == word;
    }
    bool eatIdent(const char* word) {
        if (!atIdent(word)) return false;
        lex_.advance();
        return true;
    }
    void expect(Tok k, const std::string& what) {
        if (lex_.cur().kind != k) fail("expected " + what);
        lex_.advance();
    }

    static FormulaPtr binary(FormulaKind k, FormulaPtr a, FormulaPtr b) {
        auto f = std::make_shared<Formula>();
        f->kind = k;
        f->f1 = std::move(a);
        f->f2 = std::move(b);
        return f;
    }

    FormulaPtr parseIff() {
        FormulaPtr f = parseImplies();
        while (eatIdent("iff"))
            f = binary(FormulaKind::Iff, f, parseImplies());
        return f;
    }
    FormulaPtr parseImplies() {
        FormulaPtr f = parseOr();
        if (eatIdent("implies"))
            f = binary(FormulaKind::Implies, f, parseImplies());
        return f;
    }
    FormulaPtr parseOr() {
        FormulaPtr f = parseAnd();
        while (eatIdent("or"))
            f = binary(FormulaKind::Or, f, parseAnd());
        return f;
    }
    FormulaPtr parseAnd() {
        FormulaPtr f = parseUnary();
        while (eatIdent("and"))
            f = binary(FormulaKind::And, f, parseUnary());
        return f;
    }

    FormulaPtr parseUnary() {
        if (eatIdent("not")) {
            auto f = std::make_shared<Formula>();
            f->kind = FormulaKind::Not;
            f->f1 = parseUnary();
            return f;
        }
        if (atIdent("forall") || atIdent("exists")) {
            bool isForall = lex_.cur().text == "forall";
            lex_.advance();
            if (lex_.cur().kind != Tok::Ident || isKeyword(lex_.cur().text))
                fail("variable name after quantifier");
            std::string var = lex_.cur().text;
            lex_.advance();
            bool conceptSort = isConceptName(var);
            auto f = std::make_shared<Formula>();
            f->kind = conceptSort ? (isForall ? FormulaKind::ForallConcept : FormulaKind::ExistsConcept)
                                  : (isForall ? FormulaKind::ForallObj : FormulaKind::ExistsObj);
            f->boundVar = var;
            f->f1 = parseUnary();
            return f;
        }
        if (lex_.cur().kind == Tok::LParen) {
            lex_.advance();
            FormulaPtr f = parseIff();
            expect(Tok::RParen, "')'");
            return f;
        }
        return parseAtom();
    }

    FormulaPtr parseAtom() {
        if (atIdent("card")) return parseCardAtom();
        if (atIdent("E")) {
            lex_.advance();
            expect(Tok::LParen, "'(' after E");
            auto f = std::make_shared<Formula>();
            f->kind = FormulaKind::EAtom;
            f->c1 = parseConceptTerm();
            expect(Tok::Comma, "','");
            f->c2 = parseConceptTerm();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (atIdent("Cmp")) {
            lex_.advance();
            expect(Tok::LParen, "'(' after Cmp");
            auto f = std::make_shared<Formula>();
            f->kind = FormulaKind::CmpAtom;
            f->c1 = parseConceptTerm();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (startsObjectTerm()) {
            ObjectTermPtr lhs = parseObjectTerm();
            if (eatIdent("in")) {
                auto f = std::make_shared<Formula>();
                f->kind = FormulaKind::Member;
                f->o1 = lhs;
                f->c1 = parseConceptTerm();
                return f;
            }
            expect(Tok::Eq, "'=' or 'in' after object term");
            auto f = std::make_shared<Formula>();
            f->kind = FormulaKind::ObjEq;
            f->o1 = lhs;
            f->o2 = parseObjectTerm();
            return f;
        }
        if (startsConceptTerm()) {
            ConceptTermPtr lhs = parseConceptTerm();
            expect(Tok::Eq, "'=' after concept term");
            auto f = std::make_shared<Formula>();
            f->kind = FormulaKind::ConceptEq;
            f->c1 = lhs;
            f->c2 = parseConceptTerm();
            return f;
        }
        fail("an atom");
    }

    FormulaPtr parseCardAtom() {
        lex_.advance(); // card
        expect(Tok::LParen, "'(' after card");
        auto f = std::make_shared<Formula>();
        f->kind = FormulaKind::CardCmp;
        f->c1 = parseConceptTerm();
        expect(Tok::RParen, "')'");
        switch (lex_.cur().kind) {
        case Tok::Eq: f->cardRel = CardRel::Eq; break;
        case Tok::Le: f->cardRel = CardRel::Le; break;
        case Tok::Lt: f->cardRel = CardRel::Lt; break;
        default: fail("'=', '<=' or '<' after card(..)");
        }
        lex_.advance();
        if (atIdent("card")) {
            lex_.advance();
            expect(Tok::LParen, "'(' after card");
            f->cardRhs = CardRhsKind::Card;
            f->c2 = parseConceptTerm();
            expect(Tok::RParen, "')'");
        } else if (eatIdent("omega")) {
            f->cardRhs = CardRhsKind::Omega;
        } else if (lex_.cur().kind == Tok::Int) {
            f->cardRhs = CardRhsKind::Int;
            f->cardInt = lex_.cur().value;
            lex_.advance();
        } else {
            fail("card(..), integer or omega on the right-hand side");
        }
        return f;
    }

    bool startsObjectTerm() {
        if (atIdent("abs")) return true;
        return lex_.cur().kind == Tok::Ident && !isKeyword(lex_.cur().text) &&
               !isConceptName(lex_.cur().text);
    }
    bool startsConceptTerm() {
        if (lex_.cur().kind == Tok::LBrace) return true;
        if (atIdent("empty") || atIdent("universe")) return true;
        return lex_.cur().kind == Tok::Ident && !isKeyword(lex_.cur().text) &&
               isConceptName(lex_.cur().text);
    }

    ObjectTermPtr parseObjectTerm() {
        if (eatIdent("abs")) {
            expect(Tok::LParen, "'(' after abs");
            auto t = std::make_shared<ObjectTerm>();
            t->kind = ObjectTermKind::Abs;
            t->arg = parseConceptTerm();
            expect(Tok::RParen, "')'");
            return t;
        }
        if (lex_.cur().kind != Tok::Ident || isKeyword(lex_.cur().text) ||
            isConceptName(lex_.cur().text))
            fail("an object term");
        auto t = std::make_shared<ObjectTerm>();
        t->kind = ObjectTermKind::Var;
        t->var = lex_.cur().text;
        lex_.advance();
        return t;
    }

    ConceptTermPtr parseConceptTerm() {
        ConceptTermPtr t = parseConceptPrimary();
        for (;;) {
            ConceptTermKind k;
            if (atIdent("union")) k = ConceptTermKind::Union;
            else if (atIdent("inter")) k = ConceptTermKind::Inter;
            else if (atIdent("minus")) k = ConceptTermKind::Minus;
            else break;
            lex_.advance();
            auto node = std::make_shared<ConceptTerm>();
            node->kind = k;
            node->lhs = t;
            node->rhs = parseConceptPrimary();
            t = node;
        }
        return t;
    }

    ConceptTermPtr parseConceptPrimary() {
        auto t = std::make_shared<ConceptTerm>();
        if (eatIdent("empty")) {
            t->kind = ConceptTermKind::Empty;
            return t;
        }
        if (eatIdent("universe")) {
            t->kind = ConceptTermKind::Universe;
            return t;
        }
        if (lex_.cur().kind == Tok::LBrace) {
            lex_.advance();
            t->kind = ConceptTermKind::Literal;
            if (lex_.cur().kind != Tok::RBrace) {
                for (;;) {
                    if (lex_.cur().kind != Tok::Int) fail("object index in set literal");
                    t->members.push_back(lex_.cur().value);
                    lex_.advance();
                    if (lex_.cur().kind == Tok::Comma) { lex_.advance(); continue; }
                    break;
                }
            }
            expect(Tok::RBrace, "'}'");
            std::sort(t->members.begin(), t->members.end());
            t->members.erase(std::unique(t->members.begin(), t->members.end()),
                             t->members.end());
            return t;
        }
        if (lex_.cur().kind == Tok::Ident && !isKeyword(lex_.cur().text) &&
            isConceptName(lex_.cur().text)) {
            t->kind = ConceptTermKind::Var;
            t->var = lex_.cur().text;
            lex_.advance();
            return t;
        }
        fail("a concept term");
    }

    Lexer lex_;
};

// ---------------------------------------------------------------------------
// Evaluation

struct Scope {
    const EvalContext& ctx;
    std::vector<std::pair<std::string, int>> objects;
    std::vector<std::pair<std::string, std::uint32_t>> concepts;
};

std::uint32_t evalConcept(const ConceptTerm& t, Scope& s);

int evalObject(const ObjectTerm& t, Scope& s) {
    if (t.kind == ObjectTermKind::Var) {
        for (auto it = s.objects.rbegin(); it != s.objects.rend(); ++it)
            if (it->first == t.var) return it->second;
        throw EvalError("unbound object variable '" + t.var + "'");
    }
    if (!s.ctx.abs)
        throw EvalError("abs is not available in this context");
    std::uint32_t x = evalConcept(*t.arg, s);
    std::optional<int> v = s.ctx.abs(x);
    if (!v)
        throw EvalError("abs undefined on a concept outside the carrier");
    return *v;
}

std::uint32_t evalConcept(const ConceptTerm& t, Scope& s) {
    switch (t.kind) {
    case ConceptTermKind::Var:
        for (auto it = s.concepts.rbegin(); it != s.concepts.rend(); ++it)
            if (it->first == t.var) return it->second;
        throw EvalError("unbound concept variable '" + t.var + "'");
    case ConceptTermKind::Empty:
        return 0;
    case ConceptTermKind::Universe:
        return s.ctx.carrier;
    case ConceptTermKind::Literal: {
        std::uint32_t m = 0;
        for (int i : t.members) {
            if (i < 0 || i >= s.ctx.width)
                throw EvalError("set literal member " + std::to_string(i) +
                                " outside the domain");
            m |= 1u << i;
        }
        return m;
    }
    case ConceptTermKind::Union:
        return evalConcept(*t.lhs, s) | evalConcept(*t.rhs, s);
    case ConceptTermKind::Inter:
        return evalConcept(*t.lhs, s) & evalConcept(*t.rhs, s);
    case ConceptTermKind::Minus:
        return evalConcept(*t.lhs, s) & ~evalConcept(*t.rhs, s);
    }
    throw EvalError("bad concept term");
}

bool evalFormula(const Formula& f, Scope& s) {
    switch (f.kind) {
    case FormulaKind::ObjEq:
        return evalObject(*f.o1, s) == evalObject(*f.o2, s);
    case FormulaKind::ConceptEq:
        return evalConcept(*f.c1, s) == evalConcept(*f.c2, s);
    case FormulaKind::Member: {
        int x = evalObject(*f.o1, s);
        return (evalConcept(*f.c1, s) >> x) & 1u;
    }
    case FormulaKind::EAtom:
        if (!s.ctx.equiv)
            throw EvalError("E is not available in this context");
        return s.ctx.equiv(evalConcept(*f.c1, s), evalConcept(*f.c2, s));
    case FormulaKind::CmpAtom: {
        // Cmp(X): X has an equinumerous complement within the carrier
        std::uint32_t x = evalConcept(*f.c1, s) & s.ctx.carrier;
        return std::popcount(x) == std::popcount(s.ctx.carrier & ~x);
    }
    case FormulaKind::CardCmp: {
        int lhs = std::popcount(evalConcept(*f.c1, s));
        if (f.cardRhs == CardRhsKind::Omega) {
            // every concept is finite here
            return f.cardRel != CardRel::Eq;
        }
        int rhs = (f.cardRhs == CardRhsKind::Card) ? std::popcount(evalConcept(*f.c2, s))
                                                   : f.cardInt;
        switch (f.cardRel) {
        case CardRel::Eq: return lhs == rhs;
        case CardRel::Le: return lhs <= rhs;
        case CardRel::Lt: return lhs < rhs;
        }
        return false;
    }
    case FormulaKind::Not:
        return !evalFormula(*f.f1, s);
    case FormulaKind::And:
        return evalFormula(*f.f1, s) && evalFormula(*f.f2, s);
    case FormulaKind::Or:
        return evalFormula(*f.f1, s) || evalFormula(*f.f2, s);
    case FormulaKind::Implies:
        return !evalFormula(*f.f1, s) || evalFormula(*f.f2, s);
    case FormulaKind::Iff:
        return evalFormula(*f.f1, s) == evalFormula(*f.f2, s);
    case FormulaKind::ForallObj:
    case FormulaKind::ExistsObj: {
        bool isForall = f.kind == FormulaKind::ForallObj;
        for (int i = 0; i < s.ctx.width; ++i) {
            if (!((s.ctx.carrier >> i) & 1u)) continue;
            s.objects.emplace_back(f.boundVar, i);
            bool v = evalFormula(*f.f1, s);
            s.objects.pop_back();
            if (v != isForall) return !isForall;
        }
        return isForall;
    }
    case FormulaKind::ForallConcept:
    case FormulaKind::ExistsConcept: {
        bool isForall = f.kind == FormulaKind::ForallConcept;
        std::uint32_t top = s.ctx.width >= 32 ? ~0u : ((1u << s.ctx.width) - 1u);
        for (std::uint32_t m = 0; m <= top; ++m) {
            if (m & ~s.ctx.carrier) continue;
            s.concepts.emplace_back(f.boundVar, m);
            bool v = evalFormula(*f.f1, s);
            s.concepts.pop_back();
            if (v != isForall) return !isForall;
            if (top == ~0u) break;
        }
        return isForall;
    }
    }
    throw EvalError("bad formula node");
}

} // namespace

FormulaPtr parse_formula(const std::string& text) { return Parser(text).parse(); }

bool evaluate(const Formula& f, const EvalContext& ctx, const Environment& env) {
    Scope s{ctx, env.objects, env.concepts};
    return evalFormula(f, s);
}

// ---------------------------------------------------------------------------
// Printer

std::string print_concept_term(const ConceptTerm& t) {
    switch (t.kind) {
    case ConceptTermKind::Var: return t.var;
    case ConceptTermKind::Empty: return "empty";
    case ConceptTermKind::Universe: return "universe";
    case ConceptTermKind::Literal: {
        std::string s = "{";
        for (size_t i = 0; i < t.members.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(t.members[i]);
        }
        return s + "}";
    }
    case ConceptTermKind::Union:
        return print_concept_term(*t.lhs) + " union " + print_concept_term(*t.rhs);
    case ConceptTermKind::Inter:
        return print_concept_term(*t.lhs) + " inter " + print_concept_term(*t.rhs);
    case ConceptTermKind::Minus:
        return print_concept_term(*t.lhs) + " minus " + print_concept_term(*t.rhs);
    }
    return "?";
}

std::string print_object_term(const ObjectTerm& t) {
    if (t.kind == ObjectTermKind::Var) return t.var;
    return "abs(" + print_concept_term(*t.arg) + ")";
}

std::string print_formula(const Formula& f) {
    switch (f.kind) {
    case FormulaKind::ObjEq:
        return print_object_term(*f.o1) + " = " + print_object_term(*f.o2);
    case FormulaKind::ConceptEq:
        return print_concept_term(*f.c1) + " = " + print_concept_term(*f.c2);
    case FormulaKind::Member:
        return print_object_term(*f.o1) + " in " + print_concept_term(*f.c1);
    case FormulaKind::EAtom:
        return "E(" + print_concept_term(*f.c1) + ", " + print_concept_term(*f.c2) + ")";
    case FormulaKind::CmpAtom:
        return "Cmp(" + print_concept_term(*f.c1) + ")";
    case FormulaKind::CardCmp: {
        std::string rel = f.cardRel == CardRel::Eq ? "=" : (f.cardRel == CardRel::Le ? "<=" : "<");
        std::string rhs;
        switch (f.cardRhs) {
        case CardRhsKind::Card: rhs = "card(" + print_concept_term(*f.c2) + ")"; break;
        case CardRhsKind::Int: rhs = std::to_string(f.cardInt); break;
        case CardRhsKind::Omega: rhs = "omega"; break;
        }
        return "card(" + print_concept_term(*f.c1) + ") " + rel + " " + rhs;
    }
    case FormulaKind::Not:
        return "not (" + print_formula(*f.f1) + ")";
    case FormulaKind::And:
        return "(" + print_formula(*f.f1) + " and " + print_formula(*f.f2) + ")";
    case FormulaKind::Or:
        return "(" + print_formula(*f.f1) + " or " + print_formula(*f.f2) + ")";
    case FormulaKind::Implies:
        return "(" + print_formula(*f.f1) + " implies " + print_formula(*f.f2) + ")";
    case FormulaKind::Iff:
        return "(" + print_formula(*f.f1) + " iff " + print_formula(*f.f2) + ")";
    case FormulaKind::ForallObj:
    case FormulaKind::ForallConcept:
        return "forall " + f.boundVar + " (" + print_formula(*f.f1) + ")";
    case FormulaKind::ExistsObj:
    case FormulaKind::ExistsConcept:
        return "exists " + f.boundVar + " (" + print_formula(*f.f1) + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Structural equality and free variables

namespace {

bool ctermEqual(const ConceptTerm& a, const ConceptTerm& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case ConceptTermKind::Var: return a.var == b.var;
    case ConceptTermKind::Empty:
    case ConceptTermKind::Universe: return true;
    case ConceptTermKind::Literal: return a.members == b.members;
    default: return ctermEqual(*a.lhs, *b.lhs) && ctermEqual(*a.rhs, *b.rhs);
    }
}

bool otermEqual(const ObjectTerm& a, const ObjectTerm& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == ObjectTermKind::Var) return a.var == b.var;
    return ctermEqual(*a.arg, *b.arg);
}

void ctermFree(const ConceptTerm& t, std::set<std::string>& out) {
    switch (t.kind) {
    case ConceptTermKind::Var: out.insert(t.var); break;
    case ConceptTermKind::Union:
    case ConceptTermKind::Inter:
    case ConceptTermKind::Minus:
        ctermFree(*t.lhs, out);
        ctermFree(*t.rhs, out);
        break;
    default: break;
    }
}

void freeVarsRec(const Formula& f, std::set<std::string>& cv, std::set<std::string>& ov,
                 std::set<std::string>& boundC, std::set<std::string>& boundO) {
    auto addC = [&](const ConceptTermPtr& t) {
        if (!t) return;
        std::set<std::string> names;
        ctermFree(*t, names);
        for (const auto& n : names)
            if (!boundC.count(n)) cv.insert(n);
    };
    auto addO = [&](const ObjectTermPtr& t) {
        if (!t) return;
        if (t->kind == ObjectTermKind::Var) {
            if (!boundO.count(t->var)) ov.insert(t->var);
        } else {
            addC(t->arg);
        }
    };
    switch (f.kind) {
    case FormulaKind::ObjEq: addO(f.o1); addO(f.o2); return;
    case FormulaKind::ConceptEq: addC(f.c1); addC(f.c2); return;
    case FormulaKind::Member: addO(f.o1); addC(f.c1); return;
    case FormulaKind::EAtom: addC(f.c1); addC(f.c2); return;
    case FormulaKind::CmpAtom: addC(f.c1); return;
    case FormulaKind::CardCmp: addC(f.c1); addC(f.c2); return;
    case FormulaKind::Not: freeVarsRec(*f.f1, cv, ov, boundC, boundO); return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff:
        freeVarsRec(*f.f1, cv, ov, boundC, boundO);
        freeVarsRec(*f.f2, cv, ov, boundC, boundO);
        return;
    case FormulaKind::ForallObj:
    case FormulaKind::ExistsObj: {
        bool fresh = boundO.insert(f.boundVar).second;
        freeVarsRec(*f.f1, cv, ov, boundC, boundO);
        if (fresh) boundO.erase(f.boundVar);
        return;
    }
    case FormulaKind::ForallConcept:
    case FormulaKind::ExistsConcept: {
        bool fresh = boundC.insert(f.boundVar).second;
        freeVarsRec(*f.f1, cv, ov, boundC, boundO);
        if (fresh) boundC.erase(f.boundVar);
        return;
    }
    }
}

} // namespace

bool structurally_equal(const Formula& a, const Formula& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case FormulaKind::ObjEq: return otermEqual(*a.o1, *b.o1) && otermEqual(*a.o2, *b.o2);
    case FormulaKind::ConceptEq: return ctermEqual(*a.c1, *b.c1) && ctermEqual(*a.c2, *b.c2);
    case FormulaKind::Member: return otermEqual(*a.o1, *b.o1) && ctermEqual(*a.c1, *b.c1);
    case FormulaKind::EAtom: return ctermEqual(*a.c1, *b.c1) && ctermEqual(*a.c2, *b.c2);
    case FormulaKind::CmpAtom: return ctermEqual(*a.c1, *b.c1);
    case FormulaKind::CardCmp:
        if (a.cardRel != b.cardRel || a.cardRhs != b.cardRhs) return false;
        if (!ctermEqual(*a.c1, *b.c1)) return false;
        switch (a.cardRhs) {
        case CardRhsKind::Card: return ctermEqual(*a.c2, *b.c2);
        case CardRhsKind::Int: return a.cardInt == b.cardInt;
        case CardRhsKind::Omega: return true;
        }
        return false;
    case FormulaKind::Not: return structurally_equal(*a.f1, *b.f1);
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff:
        return structurally_equal(*a.f1, *b.f1) && structurally_equal(*a.f2, *b.f2);
    default:
        return a.boundVar == b.boundVar && structurally_equal(*a.f1, *b.f1);
    }
}

void collect_free_vars(const Formula& f, std::set<std::string>& conceptVars,
                       std::set<std::string>& objectVars) {
    std::set<std::string> bc, bo;
    freeVarsRec(f, conceptVars, objectVars, bc, bo);
}

// ---------------------------------------------------------------------------
// distinguish

std::optional<Distinction> distinguish(const std::vector<FormulaPtr>& templates,
                                       const EvalContext& ctx1, const EvalContext& ctx2,
                                       std::vector<size_t>* skipped) {
    for (size_t i = 0; i < templates.size(); ++i) {
        bool v1, v2;
        try {
            v1 = evaluate(*templates[i], ctx1);
            v2 = evaluate(*templates[i], ctx2);
        } catch (const EvalError&) {
            if (skipped) skipped->push_back(i);
            continue;
        }
        if (v1 != v2)
            return Distinction{i, v1 ? 1 : 2};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Randomized truth-preserving rewrites

namespace {

FormulaPtr node(FormulaKind k, FormulaPtr a, FormulaPtr b = nullptr, std::string var = {}) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->f1 = std::move(a);
    f->f2 = std::move(b);
    f->boundVar = std::move(var);
    return f;
}

FormulaPtr rewriteOnce(const FormulaPtr& f, std::mt19937_64& rng);

FormulaPtr maybeRewrite(const FormulaPtr& f, std::mt19937_64& rng) {
    // recurse first, then possibly rewrite this node
    FormulaPtr g = f;
    switch (f->kind) {
    case FormulaKind::Not:
        g = node(f->kind, rewriteOnce(f->f1, rng));
        break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff:
        g = node(f->kind, rewriteOnce(f->f1, rng), rewriteOnce(f->f2, rng));
        break;
    case FormulaKind::ForallObj:
    case FormulaKind::ExistsObj:
    case FormulaKind::ForallConcept:
    case FormulaKind::ExistsConcept:
        g = node(f->kind, rewriteOnce(f->f1, rng), nullptr, f->boundVar);
        break;
    default:
        return f; // atoms untouched
    }
    return g;
}

FormulaKind dualQuant(FormulaKind k) {
    switch (k) {
    case FormulaKind::ForallObj: return FormulaKind::ExistsObj;
    case FormulaKind::ExistsObj: return FormulaKind::ForallObj;
    case FormulaKind::ForallConcept: return FormulaKind::ExistsConcept;
    default: return FormulaKind::ForallConcept;
    }
}

bool isQuant(FormulaKind k) {
    return k == FormulaKind::ForallObj || k == FormulaKind::ExistsObj ||
           k == FormulaKind::ForallConcept || k == FormulaKind::ExistsConcept;
}

FormulaPtr rewriteOnce(const FormulaPtr& f, std::mt19937_64& rng) {
    FormulaPtr g = maybeRewrite(f, rng);
    if (rng() % 2 == 0) return g;
    auto neg = [](FormulaPtr x) { return node(FormulaKind::Not, std::move(x)); };
    switch (g->kind) {
    case FormulaKind::Not:
        if (g->f1->kind == FormulaKind::Not) return g->f1->f1;            // ¬¬a → a
        if (g->f1->kind == FormulaKind::And)                              // De Morgan
            return node(FormulaKind::Or, neg(g->f1->f1), neg(g->f1->f2));
        if (g->f1->kind == FormulaKind::Or)
            return node(FormulaKind::And, neg(g->f1->f1), neg(g->f1->f2));
        if (isQuant(g->f1->kind))                                         // quantifier duality
            return node(dualQuant(g->f1->kind), neg(g->f1->f1), nullptr, g->f1->boundVar);
        return neg(neg(g));
    case FormulaKind::Implies:
        return node(FormulaKind::Or, neg(g->f1), g->f2);
    case FormulaKind::Iff:
        return node(FormulaKind::And, node(FormulaKind::Implies, g->f1, g->f2),
                    node(FormulaKind::Implies, g->f2, g->f1));
    case FormulaKind::And:
        return neg(node(FormulaKind::Or, neg(g->f1), neg(g->f2)));
    case FormulaKind::Or:
        return neg(node(FormulaKind::And, neg(g->f1), neg(g->f2)));
    default:
        if (isQuant(g->kind))
            return neg(node(dualQuant(g->kind), neg(g->f1), nullptr, g->boundVar));
        return g;
    }
}

} // namespace

FormulaPtr rewrite_equivalent(const Formula& f, std::uint64_t seed, int steps) {
    std::mt19937_64 rng(seed);
    FormulaPtr cur = std::make_shared<Formula>(f);
    for (int i = 0; i < steps; ++i)
        cur = rewriteOnce(cur, rng);
    return cur;
}

} // namespace absw
