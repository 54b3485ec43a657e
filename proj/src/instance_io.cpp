#include "trapsnet/instance_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "trapsnet/domains.hpp"

namespace trapsnet {

namespace {

// ---------------------------------------------------------------- lexer --

enum class Tok { Ident, Number, LBrace, RBrace, LParen, RParen, Equals,
                 Semi, Colon, Comma, End };

const char* tok_name(Tok t) {
    switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Equals: return "'='";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_space_and_comments();
        current_ = Token{Tok::End, "", line_, col_};
        if (pos_ >= text_.size()) return;
        char c = text_[pos_];
        int line = line_, col = col_;
        auto single = [&](Tok k) {
            current_ = Token{k, std::string(1, c), line, col};
            consume();
        };
        switch (c) {
        case '{': single(Tok::LBrace); return;
        case '}': single(Tok::RBrace); return;
        case '(': single(Tok::LParen); return;
        case ')': single(Tok::RParen); return;
        case '=': single(Tok::Equals); return;
        case ';': single(Tok::Semi); return;
        case ':': single(Tok::Colon); return;
        case ',': single(Tok::Comma); return;
        default: break;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string s;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (!std::isalnum(static_cast<unsigned char>(d)) && d != '_' && d != '-')
                    break;
                s += d;
                consume();
            }
            current_ = Token{Tok::Ident, std::move(s), line, col};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' ||
            c == '.') {
            std::string s;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (!std::isdigit(static_cast<unsigned char>(d)) && d != '.' &&
                    d != '-' && d != '+' && d != 'e' && d != 'E')
                    break;
                s += d;
                consume();
            }
            current_ = Token{Tok::Number, std::move(s), line, col};
            return;
        }
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }

    void skip_space_and_comments() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') consume();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                consume();
            } else {
                break;
            }
        }
    }

    void consume() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token current_;
};

// --------------------------------------------------------------- parser --

class InstanceParser {
public:
    explicit InstanceParser(const std::string& text) : lex_(text) {}

    ProblemInstance parse() {
        expect_keyword("instance");
        inst_.name = expect(Tok::Ident).text;
        expect(Tok::LBrace);

        expect_keyword("domain");
        expect(Tok::Equals);
        Token dom = expect(Tok::Ident);
        try {
            inst_.domain = domain_from_name(dom.text);
        } catch (const Error&) {
            throw SemanticError(dom.line, dom.column, "unknown domain '" + dom.text + "'");
        }
        schema_ = &schema(inst_.domain);
        expect(Tok::Semi);

        parse_objects();
        int n = inst_.object_count();
        inst_.unary_nonfluents =
            Tensor(n, static_cast<int>(schema_->unary_nonfluents.size()));
        inst_.binary_nonfluent = Tensor(n, n);
        inst_.initial_fluents = Tensor(n, static_cast<int>(schema_->fluents.size()));

        if (at_keyword("non-fluents")) parse_assignment_block(false);
        if (at_keyword("init-state")) parse_assignment_block(true);

        Token h = expect_keyword("horizon");
        expect(Tok::Equals);
        inst_.horizon = expect_int();
        expect(Tok::Semi);
        if (inst_.horizon < 1)
            throw SemanticError(h.line, h.column, "horizon must be >= 1");

        Token d = expect_keyword("discount");
        expect(Tok::Equals);
        inst_.discount = expect_number();
        expect(Tok::Semi);
        if (!(inst_.discount > 0.0 && inst_.discount <= 1.0))
            throw SemanticError(d.line, d.column, "discount must be in (0, 1]");

        inst_.params = default_params(inst_.domain);
        if (at_keyword("params")) parse_params();

        expect(Tok::RBrace);
        if (lex_.peek().kind != Tok::End)
            throw ParseError(lex_.peek().line, lex_.peek().column,
                             "trailing input after instance", tok_name(Tok::End));
        inst_.validate();
        return std::move(inst_);
    }

private:
    Token expect(Tok kind) {
        Token t = lex_.take();
        if (t.kind != kind)
            throw ParseError(t.line, t.column,
                             std::string("expected ") + tok_name(kind) + ", got " +
                                 (t.kind == Tok::End ? "end of input" : "'" + t.text + "'"),
                             tok_name(kind));
        return t;
    }

    Token expect_keyword(const std::string& word) {
        Token t = lex_.take();
        if (t.kind != Tok::Ident || t.text != word)
            throw ParseError(t.line, t.column,
                             "expected '" + word + "', got " +
                                 (t.kind == Tok::End ? "end of input" : "'" + t.text + "'"),
                             word);
        return t;
    }

    bool at_keyword(const std::string& word) {
        return lex_.peek().kind == Tok::Ident && lex_.peek().text == word;
    }

    int expect_int() {
        Token t = expect(Tok::Number);
        int value = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc() || p != t.text.data() + t.text.size())
            throw ParseError(t.line, t.column, "expected integer, got '" + t.text + "'",
                             "integer");
        return value;
    }

    double expect_number() {
        Token t = lex_.take();
        if (t.kind == Tok::Ident && t.text == "true") return 1.0;
        if (t.kind == Tok::Ident && t.text == "false") return 0.0;
        if (t.kind != Tok::Number)
            throw ParseError(t.line, t.column, "expected number, got '" + t.text + "'",
                             "number");
        double value = 0.0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc() || p != t.text.data() + t.text.size())
            throw ParseError(t.line, t.column, "malformed number '" + t.text + "'",
                             "number");
        return value;
    }

    void parse_objects() {
        expect_keyword("objects");
        expect(Tok::LBrace);
        Token type = expect(Tok::Ident);
        if (type.text != schema_->object_type)
            throw SemanticError(type.line, type.column,
                                "expected object type '" + schema_->object_type +
                                    "' for this domain, got '" + type.text + "'");
        expect(Tok::Colon);
        expect(Tok::LBrace);
        while (true) {
            Token obj = expect(Tok::Ident);
            if (object_index_.count(obj.text))
                throw SemanticError(obj.line, obj.column,
                                    "duplicate object '" + obj.text + "'");
            object_index_[obj.text] = inst_.object_count();
            inst_.objects.push_back(obj.text);
            if (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                continue;
            }
            break;
        }
        expect(Tok::RBrace);
        expect(Tok::Semi);
        expect(Tok::RBrace);
        expect(Tok::Semi);
    }

    int resolve_object(const Token& t) {
        auto it = object_index_.find(t.text);
        if (it == object_index_.end())
            throw SemanticError(t.line, t.column, "unknown object '" + t.text + "'");
        return it->second;
    }

    int column_of(const std::vector<std::string>& names, const Token& t) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == t.text) return static_cast<int>(i);
        return -1;
    }

    void parse_assignment_block(bool init_state) {
        lex_.take();   // block keyword
        expect(Tok::LBrace);
        while (lex_.peek().kind == Tok::Ident) {
            Token name = lex_.take();
            expect(Tok::LParen);
            Token arg1 = expect(Tok::Ident);
            Token arg2{Tok::End, "", 0, 0};
            bool binary = false;
            if (lex_.peek().kind == Tok::Comma) {
                lex_.take();
                arg2 = expect(Tok::Ident);
                binary = true;
            }
            expect(Tok::RParen);
            expect(Tok::Equals);
            double value = expect_number();
            expect(Tok::Semi);
            if (init_state)
                apply_fluent(name, arg1, binary, value);
            else
                apply_nonfluent(name, arg1, arg2, binary, value);
        }
        expect(Tok::RBrace);
        expect(Tok::Semi);
    }

    void apply_nonfluent(const Token& name, const Token& arg1, const Token& arg2,
                         bool binary, double value) {
        if (binary) {
            if (name.text != schema_->binary_nonfluent)
                throw SemanticError(name.line, name.column,
                                    "unknown binary non-fluent '" + name.text + "'");
            int i = resolve_object(arg1);
            int j = resolve_object(arg2);
            if (i == j)
                throw SemanticError(arg1.line, arg1.column,
                                    "self-loop on object '" + arg1.text + "'");
            if (value != 0.0 && value != 1.0)
                throw SemanticError(name.line, name.column,
                                    "binary non-fluent value must be 0 or 1");
            if (!seen_edges_.insert({i, j}).second)
                throw SemanticError(name.line, name.column,
                                    "duplicate assignment for " + name.text + "(" +
                                        arg1.text + ", " + arg2.text + ")");
            inst_.binary_nonfluent.at(i, j) = value;
            if (schema_->symmetric_adjacency)
                inst_.binary_nonfluent.at(j, i) = value;
            return;
        }
        int col = column_of(schema_->unary_nonfluents, name);
        if (col < 0)
            throw SemanticError(name.line, name.column,
                                "unknown non-fluent '" + name.text + "'");
        int i = resolve_object(arg1);
        if (!seen_unary_.insert({col, i}).second)
            throw SemanticError(name.line, name.column,
                                "duplicate assignment for " + name.text + "(" +
                                    arg1.text + ")");
        inst_.unary_nonfluents.at(i, col) = value;
    }

    void apply_fluent(const Token& name, const Token& arg, bool binary, double value) {
        if (binary)
            throw SemanticError(name.line, name.column,
                                "fluents take exactly one object argument");
        int col = column_of(schema_->fluents, name);
        if (col < 0)
            throw SemanticError(name.line, name.column,
                                "unknown fluent '" + name.text + "'");
        int i = resolve_object(arg);
        if (!seen_fluents_.insert({col, i}).second)
            throw SemanticError(name.line, name.column,
                                "duplicate assignment for " + name.text + "(" +
                                    arg.text + ")");
        inst_.initial_fluents.at(i, col) = value;
    }

    void parse_params() {
        lex_.take();
        expect(Tok::LBrace);
        while (lex_.peek().kind == Tok::Ident) {
            Token key = lex_.take();
            expect(Tok::Equals);
            double value = expect_number();
            expect(Tok::Semi);
            if (!set_param(inst_.params, key.text, value))
                throw SemanticError(key.line, key.column,
                                    "unknown parameter '" + key.text + "' for domain " +
                                        domain_name(inst_.domain));
        }
        expect(Tok::RBrace);
        expect(Tok::Semi);
    }

public:
    static DomainParams default_params(DomainId id) {
        switch (id) {
        case DomainId::SysAdmin: return SysAdminParams{};
        case DomainId::GameOfLife: return GoLParams{};
        case DomainId::AcademicAdvising: return AcadParams{};
        }
        throw Error("unknown domain id");
    }

    static bool set_param(DomainParams& params, const std::string& key, double value) {
        bool found = false;
        auto bind = [&](const std::string& name, double& field) {
            if (key == name) {
                field = value;
                found = true;
            }
        };
        if (auto* p = std::get_if<SysAdminParams>(&params)) {
            bind("reboot_success_prob", p->reboot_success_prob);
            bind("base_running_prob", p->base_running_prob);
            bind("neighbor_bonus", p->neighbor_bonus);
            bind("spontaneous_recovery_prob", p->spontaneous_recovery_prob);
            bind("reboot_penalty", p->reboot_penalty);
        } else if (auto* p = std::get_if<GoLParams>(&params)) {
            bind("noise_prob", p->noise_prob);
            bind("set_action_penalty", p->set_action_penalty);
        } else if (auto* p = std::get_if<AcadParams>(&params)) {
            bind("prior_pass_prob_no_prereq", p->prior_pass_prob_no_prereq);
            bind("pass_prob_scale", p->pass_prob_scale);
            bind("course_cost", p->course_cost);
            bind("redo_cost", p->redo_cost);
            bind("incomplete_penalty", p->incomplete_penalty);
        }
        return found;
    }

    static std::vector<std::pair<std::string, double>> params_to_kv(
        const DomainParams& params) {
        std::vector<std::pair<std::string, double>> kv;
        if (const auto* p = std::get_if<SysAdminParams>(&params)) {
            kv = {{"base_running_prob", p->base_running_prob},
                  {"neighbor_bonus", p->neighbor_bonus},
                  {"reboot_penalty", p->reboot_penalty},
                  {"reboot_success_prob", p->reboot_success_prob},
                  {"spontaneous_recovery_prob", p->spontaneous_recovery_prob}};
        } else if (const auto* p = std::get_if<GoLParams>(&params)) {
            kv = {{"noise_prob", p->noise_prob},
                  {"set_action_penalty", p->set_action_penalty}};
        } else if (const auto* p = std::get_if<AcadParams>(&params)) {
            kv = {{"course_cost", p->course_cost},
                  {"incomplete_penalty", p->incomplete_penalty},
                  {"pass_prob_scale", p->pass_prob_scale},
                  {"prior_pass_prob_no_prereq", p->prior_pass_prob_no_prereq},
                  {"redo_cost", p->redo_cost}};
        }
        return kv;
    }

private:
    Lexer lex_;
    ProblemInstance inst_;
    const DomainSchema* schema_ = nullptr;
    std::map<std::string, int> object_index_;
    std::set<std::pair<int, int>> seen_edges_;
    std::set<std::pair<int, int>> seen_unary_;
    std::set<std::pair<int, int>> seen_fluents_;
};

std::string format_number(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

} // namespace

ProblemInstance parse_instance(const std::string& text) {
    return InstanceParser(text).parse();
}

std::string write_instance(const ProblemInstance& instance) {
    instance.validate();
    const DomainSchema& s = schema(instance.domain);
    int n = instance.object_count();
    std::ostringstream out;
    out << "instance " << instance.name << " {\n";
    out << "  domain = " << domain_name(instance.domain) << ";\n";
    out << "  objects { " << s.object_type << " : {";
    for (int i = 0; i < n; ++i)
        out << (i ? ", " : "") << instance.objects[i];
    out << "}; };\n";

    out << "  non-fluents {\n";
    for (std::size_t c = 0; c < s.unary_nonfluents.size(); ++c)
        for (int i = 0; i < n; ++i)
            if (instance.unary_nonfluents.at(i, static_cast<int>(c)) != 0.0)
                out << "    " << s.unary_nonfluents[c] << "(" << instance.objects[i]
                    << ") = "
                    << format_number(instance.unary_nonfluents.at(i, static_cast<int>(c)))
                    << ";\n";
    for (int i = 0; i < n; ++i)
        for (int j = s.symmetric_adjacency ? i + 1 : 0; j < n; ++j)
            if (j != i && instance.binary_nonfluent.at(i, j) != 0.0)
                out << "    " << s.binary_nonfluent << "(" << instance.objects[i]
                    << ", " << instance.objects[j] << ") = 1;\n";
    out << "  };\n";

    out << "  init-state {\n";
    for (std::size_t c = 0; c < s.fluents.size(); ++c)
        for (int i = 0; i < n; ++i)
            if (instance.initial_fluents.at(i, static_cast<int>(c)) != 0.0)
                out << "    " << s.fluents[c] << "(" << instance.objects[i] << ") = "
                    << format_number(instance.initial_fluents.at(i, static_cast<int>(c)))
                    << ";\n";
    out << "  };\n";

    out << "  horizon = " << instance.horizon << ";\n";
    out << "  discount = " << format_number(instance.discount) << ";\n";
    out << "  params {\n";
    for (const auto& [key, value] : InstanceParser::params_to_kv(instance.params))
        out << "    " << key << " = " << format_number(value) << ";\n";
    out << "  };\n";
    out << "}\n";
    return out.str();
}

ProblemInstance load_instance_file(const std::string& path) {
    return load_instance_document(path).instance;
}

InstanceDocument load_instance_document(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open instance file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    InstanceDocument doc;
    doc.text = text.str();
    doc.instance = parse_instance(doc.text);
    doc.source_path = path;
    return doc;
}

void save_instance_file(const ProblemInstance& instance, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write instance file: " + path);
    out << write_instance(instance);
}

// ---------------------------------------------------------- checkpoints --

namespace {

constexpr char kMagic[4] = {'T', 'P', 'S', 'N'};

class ByteWriter {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back((v >> (8 * i)) & 0xFF);
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes_.push_back((v >> (8 * i)) & 0xFF);
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes_.insert(bytes_.end(), s.begin(), s.end());
    }

    std::vector<std::uint8_t> take() { return std::move(bytes_); }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(bytes_[pos_++]) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(bytes_[pos_++]) << (8 * i);
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        std::uint32_t len = u32();
        need(len);
        std::string s(bytes_.begin() + pos_, bytes_.begin() + pos_ + len);
        pos_ += len;
        return s;
    }
    std::size_t pos() const { return pos_; }

private:
    void need(std::size_t n) {
        if (pos_ + n > bytes_.size())
            throw CorruptChecksum("checkpoint truncated");
    }

    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t n) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

std::vector<std::uint8_t> save_checkpoint(const Checkpoint& checkpoint) {
    if (!checkpoint.params.all_finite())
        throw Error("checkpoint contains non-finite parameters");
    ByteWriter w;
    for (char c : kMagic) w.u8(static_cast<std::uint8_t>(c));
    w.u32(checkpoint.format_version);
    w.u8(static_cast<std::uint8_t>(checkpoint.domain));
    const EncoderConfig& c = checkpoint.config;
    w.u8(c.kind == EncoderKind::Gat ? 0 : 1);
    w.i32(c.gat_out);
    w.i32(c.embed_dim);
    w.i32(c.gat_repeats);
    w.i32(c.feature_count);
    w.i32(c.num_templates);
    w.u8(c.shared_encoder ? 1 : 0);
    w.f64(checkpoint.meta.wall_seconds);
    w.u64(checkpoint.meta.gradient_steps);
    w.u64(checkpoint.meta.seed);
    w.u32(static_cast<std::uint32_t>(checkpoint.params.tensor_count()));
    for (const std::string& name : checkpoint.params.names()) {
        const Tensor& t = checkpoint.params.get(name);
        w.str(name);
        w.i32(t.rows());
        w.i32(t.cols());
        for (double v : t.data()) w.f64(v);
    }
    std::uint64_t checksum = fnv1a(w.bytes().data(), w.bytes().size());
    w.u64(checksum);
    return w.take();
}

Checkpoint load_checkpoint(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 12) throw CorruptChecksum("checkpoint truncated");
    std::uint64_t stored = 0;
    for (int i = 0; i < 8; ++i)
        stored |= std::uint64_t(bytes[bytes.size() - 8 + i]) << (8 * i);
    if (fnv1a(bytes.data(), bytes.size() - 8) != stored)
        throw CorruptChecksum("checkpoint checksum mismatch");

    ByteReader r(bytes);
    char magic[4];
    for (char& c : magic) c = static_cast<char>(r.u8());
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw CorruptChecksum("not a checkpoint file");
    Checkpoint cp;
    cp.format_version = r.u32();
    if (cp.format_version != Checkpoint::kFormatVersion)
        throw VersionMismatch("unsupported checkpoint version " +
                              std::to_string(cp.format_version));
    cp.domain = static_cast<DomainId>(r.u8());
    cp.config.kind = r.u8() == 0 ? EncoderKind::Gat : EncoderKind::Gcn;
    cp.config.gat_out = r.i32();
    cp.config.embed_dim = r.i32();
    cp.config.gat_repeats = r.i32();
    cp.config.feature_count = r.i32();
    cp.config.num_templates = r.i32();
    cp.config.shared_encoder = r.u8() != 0;
    cp.meta.wall_seconds = r.f64();
    cp.meta.gradient_steps = r.u64();
    cp.meta.seed = r.u64();
    std::uint32_t count = r.u32();
    for (std::uint32_t i = 0; i < count; ++i) {
        std::string name = r.str();
        int rows = r.i32();
        int cols = r.i32();
        if (rows < 0 || cols < 0 || rows * static_cast<long>(cols) > (1L << 30))
            throw CorruptChecksum("implausible tensor shape in checkpoint");
        Tensor& t = cp.params.create(name, rows, cols);
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = r.f64();
    }
    return cp;
}

void save_checkpoint_file(const Checkpoint& checkpoint, const std::string& path) {
    std::vector<std::uint8_t> bytes = save_checkpoint(checkpoint);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write checkpoint file: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

Checkpoint load_checkpoint_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return load_checkpoint(bytes);
}

} // namespace trapsnet
