#include "stateprio/solver.hpp"

#include "stateprio/encoder.hpp"
#include "stateprio/error.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace stateprio {

namespace fs = std::filesystem;

SolverConfig SolverConfig::from_env()
{
    SolverConfig c;
    if (const char* p = std::getenv("STATEPRIO_SOLVER"); p && *p)
        c.path = p;
    return c;
}

std::string_view to_string(SolverStatus s)
{
    switch (s) {
    case SolverStatus::Sat: return "sat";
    case SolverStatus::Unsat: return "unsat";
    case SolverStatus::Unknown: return "unknown";
    case SolverStatus::SolverError: return "solver-error";
    }
    return "?";
}

namespace {

// Owns a temp file for the lifetime of one call.
class TempFile {
public:
    explicit TempFile(const std::string& suffix)
    {
        std::string pattern = (fs::temp_directory_path() / "stateprio-XXXXXX").string() + suffix;
        std::vector<char> buf(pattern.begin(), pattern.end());
        buf.push_back('\0');
        fd_ = ::mkstemps(buf.data(), static_cast<int>(suffix.size()));
        if (fd_ < 0)
            throw SolverError(std::string("cannot create temp file: ") + std::strerror(errno));
        path_ = buf.data();
    }
    ~TempFile()
    {
        if (fd_ >= 0)
            ::close(fd_);
        std::error_code ec;
        fs::remove(path_, ec);
    }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;

    const std::string& path() const { return path_; }
    int fd() const { return fd_; }

    std::string read_all() const
    {
        std::ifstream in(path_, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

private:
    int fd_ = -1;
    std::string path_;
};

void write_all(int fd, const std::string& text)
{
    std::size_t off = 0;
    while (off < text.size()) {
        ssize_t n = ::write(fd, text.data() + off, text.size() - off);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            throw SolverError(std::string("cannot write script: ") + std::strerror(errno));
        }
        off += static_cast<std::size_t>(n);
    }
}

std::atomic<unsigned> g_script_counter{0};

void keep_script(const std::string& dir, const std::string& script)
{
    unsigned n = ++g_script_counter;
    fs::create_directories(dir);
    char name[32];
    std::snprintf(name, sizeof name, "%06u.smt2", n);
    std::ofstream out(fs::path(dir) / name, std::ios::binary);
    out << script;
}

// Minimal s-expression reader for model output.
struct Sexp {
    std::string atom;
    std::vector<Sexp> list;
    bool is_list = false;
};

class SexpReader {
public:
    explicit SexpReader(std::string_view s) : s_(s) {}

    std::optional<Sexp> next()
    {
        skip();
        if (pos_ >= s_.size())
            return std::nullopt;
        return read();
    }

private:
    void skip()
    {
        while (pos_ < s_.size()) {
            if (std::isspace(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            else if (s_[pos_] == ';')
                while (pos_ < s_.size() && s_[pos_] != '\n')
                    ++pos_;
            else
                break;
        }
    }

    Sexp read()
    {
        skip();
        if (pos_ >= s_.size())
            throw SolverError("unexpected end of solver output");
        Sexp e;
        if (s_[pos_] == '(') {
            ++pos_;
            e.is_list = true;
            for (;;) {
                skip();
                if (pos_ >= s_.size())
                    throw SolverError("unbalanced parentheses in solver output");
                if (s_[pos_] == ')') {
                    ++pos_;
                    return e;
                }
                e.list.push_back(read());
            }
        }
        if (s_[pos_] == ')')
            throw SolverError("unexpected ')' in solver output");
        if (s_[pos_] == '"') {
            std::size_t start = pos_++;
            while (pos_ < s_.size()) {
                if (s_[pos_] == '"') {
                    if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '"') {
                        pos_ += 2;
                        continue;
                    }
                    break;
                }
                ++pos_;
            }
            ++pos_;
            e.atom = std::string(s_.substr(start, pos_ - start));
            return e;
        }
        if (s_[pos_] == '|') {
            std::size_t start = ++pos_;
            while (pos_ < s_.size() && s_[pos_] != '|')
                ++pos_;
            e.atom = std::string(s_.substr(start, pos_ - start));
            ++pos_;
            return e;
        }
        std::size_t start = pos_;
        while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '('
            && s_[pos_] != ')')
            ++pos_;
        e.atom = std::string(s_.substr(start, pos_ - start));
        return e;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

Rational numeral(const Sexp& e)
{
    if (!e.is_list)
        return Rational::parse(e.atom);
    if (e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "-")
        return -numeral(e.list[1]);
    if (e.list.size() == 3 && !e.list[0].is_list && e.list[0].atom == "/") {
        Rational a = numeral(e.list[1]);
        Rational b = numeral(e.list[2]);
        if (b == Rational(0))
            throw SolverError("division by zero in model value");
        // a / b with both rationals
        return a * Rational(b.den(), b.num());
    }
    if (e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "to_real")
        return numeral(e.list[1]);
    throw SolverError("unsupported model value");
}

Value model_value(const Sexp& sort, const Sexp& body)
{
    std::string s = sort.is_list ? "" : sort.atom;
    if (s == "Bool") {
        if (body.is_list || (body.atom != "true" && body.atom != "false"))
            throw SolverError("unsupported boolean model value");
        return Value::boolean(body.atom == "true");
    }
    Rational r = numeral(body);
    if (s == "Int") {
        if (!r.is_integer())
            throw SolverError("non-integral value for Int");
        return Value::integer(r.num());
    }
    if (s == "Real")
        return Value::real(r);
    throw SolverError("unsupported sort in model");
}

} // namespace

SolverVerdict parse_solver_output(const std::string& out)
{
    SolverVerdict v;
    v.stdout_text = out;
    std::optional<SolverStatus> status;
    std::vector<std::string> errors;
    SolverModel model;
    bool have_model = false;
    try {
        SexpReader rd(out);
        while (auto e = rd.next()) {
            if (!e->is_list) {
                if (!status && (e->atom == "sat" || e->atom == "unsat" || e->atom == "unknown"))
                    status = e->atom == "sat" ? SolverStatus::Sat
                        : e->atom == "unsat"  ? SolverStatus::Unsat
                                              : SolverStatus::Unknown;
                continue;
            }
            if (!e->list.empty() && !e->list[0].is_list && e->list[0].atom == "error") {
                std::string msg = e->list.size() > 1 ? e->list[1].atom : "";
                if (msg.size() >= 2 && msg.front() == '"')
                    msg = msg.substr(1, msg.size() - 2);
                errors.push_back(msg);
                continue;
            }
            // model: a list of define-fun entries, optionally headed by "model"
            have_model = true;
            for (const auto& d : e->list) {
                if (!d.is_list || d.list.size() != 5 || d.list[0].atom != "define-fun")
                    continue;
                if (!d.list[2].is_list || !d.list[2].list.empty())
                    continue; // functions with arguments are not step variables
                model[d.list[1].atom] = model_value(d.list[3], d.list[4]);
            }
        }
    } catch (const Error& ex) {
        v.status = SolverStatus::SolverError;
        v.message = ex.what();
        return v;
    }

    for (const auto& msg : errors) {
        bool benign = msg.find("model is not available") != std::string::npos
            && (status == SolverStatus::Unsat || status == SolverStatus::Unknown);
        if (!benign) {
            v.status = SolverStatus::SolverError;
            v.message = msg;
            return v;
        }
    }
    if (!status) {
        v.status = SolverStatus::SolverError;
        v.message = "no status in solver output";
        return v;
    }
    v.status = *status;
    if (v.status == SolverStatus::Sat) {
        if (!have_model) {
            v.status = SolverStatus::SolverError;
            v.message = "sat without a model";
            return v;
        }
        v.model = std::move(model);
    }
    return v;
}

SolverVerdict solve(const std::string& script, const SolverConfig& cfg)
{
    if (cfg.keep_scripts)
        keep_script(*cfg.keep_scripts, script);

    TempFile in(".smt2");
    write_all(in.fd(), script);
    TempFile out(".out");
    TempFile err(".err");

    posix_spawn_file_actions_t fa;
    posix_spawn_file_actions_init(&fa);
    posix_spawn_file_actions_adddup2(&fa, out.fd(), STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&fa, err.fd(), STDERR_FILENO);
    posix_spawn_file_actions_addopen(&fa, STDIN_FILENO, "/dev/null", O_RDONLY, 0);

    std::vector<std::string> argv_s{cfg.path};
    argv_s.insert(argv_s.end(), cfg.args.begin(), cfg.args.end());
    argv_s.push_back(in.path());
    std::vector<char*> argv;
    for (auto& a : argv_s)
        argv.push_back(a.data());
    argv.push_back(nullptr);

    auto start = std::chrono::steady_clock::now();
    pid_t pid = 0;
    int rc = ::posix_spawnp(&pid, cfg.path.c_str(), &fa, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&fa);
    if (rc != 0)
        throw SolverError("cannot run solver '" + cfg.path + "': " + std::strerror(rc));

    int wstatus = 0;
    bool timed_out = false;
    auto nap = std::chrono::microseconds(200);
    for (;;) {
        pid_t r = ::waitpid(pid, &wstatus, WNOHANG);
        if (r == pid)
            break;
        if (r < 0 && errno != EINTR)
            throw SolverError(std::string("waitpid failed: ") + std::strerror(errno));
        if (std::chrono::steady_clock::now() - start > cfg.timeout) {
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &wstatus, 0);
            timed_out = true;
            break;
        }
        std::this_thread::sleep_for(nap);
        nap = std::min(nap * 2, std::chrono::microseconds(5000));
    }
    auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);

    if (timed_out) {
        SolverVerdict v;
        v.status = SolverStatus::Unknown;
        v.timed_out = true;
        v.message = "timeout after " + std::to_string(cfg.timeout.count()) + " ms";
        v.stdout_text = out.read_all();
        v.stderr_text = err.read_all();
        v.wall = wall;
        return v;
    }

    SolverVerdict v = parse_solver_output(out.read_all());
    v.stderr_text = err.read_all();
    v.wall = wall;
    bool exited_ok = WIFEXITED(wstatus) && WEXITSTATUS(wstatus) == 0;
    if (!exited_ok && v.status != SolverStatus::SolverError) {
        // z3 exits 1 after the benign get-model error on unsat
        bool benign = WIFEXITED(wstatus) && (v.status == SolverStatus::Unsat || v.status == SolverStatus::Unknown);
        if (!benign) {
            v.status = SolverStatus::SolverError;
            v.model.reset();
            v.message = WIFSIGNALED(wstatus) ? "solver killed by signal " + std::to_string(WTERMSIG(wstatus))
                                             : "solver exited with status " + std::to_string(WEXITSTATUS(wstatus));
        }
    }
    return v;
}

Configuration create_config(const SolverModel& m, int step, const Network& net, bool act_only)
{
    Configuration c;
    c.step = step;
    for (const auto& action : net.actions()) {
        std::string n = step_name(action, step);
        if (auto it = m.find(n); it != m.end())
            c.act[action] = it->second.as_bool();
        else {
            c.act[action] = false;
            c.defaulted.insert(n);
        }
    }
    if (act_only)
        return c;
    for (std::size_t a = 0; a < net.size(); ++a) {
        const Automaton& aut = net.automaton(a);
        std::string n = step_name(aut.name, step);
        std::optional<std::int64_t> code;
        if (auto it = m.find(n); it != m.end()) {
            code = it->second.as_int();
        } else {
            c.defaulted.insert(n);
            if (auto it0 = m.find(step_name(aut.name, 0)); it0 != m.end())
                code = it0->second.as_int();
            else
                code = net.location_code(a, *aut.location_index(aut.initial));
        }
        auto l = net.location_from_code(a, *code);
        if (!l)
            throw SolverError("model assigns " + n + " = " + std::to_string(*code) + ", not a location code of '"
                + aut.name + "'");
        c.loc[aut.name] = aut.locations[*l];
    }
    for (const auto& v : net.vars()) {
        std::string n = step_name(v.name, step);
        if (auto it = m.find(n); it != m.end()) {
            Value val = it->second;
            if (v.type == Type::Real && val.type() == Type::Int)
                val = Value::real(val.as_rational());
            c.var[v.name] = val;
        } else {
            c.defaulted.insert(n);
            c.var[v.name] = Value::zero_of(v.type);
        }
    }
    return c;
}

} // namespace stateprio

namespace stateprio {

std::vector<std::string> audit_model(const Encoder& enc, const SolverModel& m)
{
    const Network& net = enc.network();
    std::vector<std::string> out;
    auto get = [&](const std::string& n) -> const Value* {
        auto it = m.find(n);
        if (it == m.end()) {
            out.push_back("missing value for " + n);
            return nullptr;
        }
        return &it->second;
    };
    for (int i = 0; i <= enc.bound(); ++i) {
        int fired = 0;
        for (const auto& action : net.actions())
            if (const Value* v = get(step_name(action, i)); v && v->as_bool())
                ++fired;
        if (fired > 1)
            out.push_back("step " + std::to_string(i) + ": " + std::to_string(fired) + " actions true");
        if (i == enc.bound())
            break;
        for (std::size_t a = 0; a < net.size(); ++a) {
            const Automaton& aut = net.automaton(a);
            bool idle = true;
            for (const auto& action : aut.alphabet())
                if (const Value* v = get(step_name(action, i)); v && v->as_bool())
                    idle = false;
            if (!idle)
                continue;
            const Value* l0 = get(step_name(aut.name, i));
            const Value* l1 = get(step_name(aut.name, i + 1));
            if (l0 && l1 && !(*l0 == *l1))
                out.push_back("step " + std::to_string(i) + ": idle " + aut.name + " moved");
            for (const auto& v : net.vars()) {
                const auto& ws = enc.writers(v.name);
                if (ws.size() != 1 || *ws.begin() != a)
                    continue;
                const Value* v0 = get(step_name(v.name, i));
                const Value* v1 = get(step_name(v.name, i + 1));
                if (v0 && v1 && !(v0->as_rational() == v1->as_rational()))
                    out.push_back("step " + std::to_string(i) + ": idle " + aut.name + " changed " + v.name);
            }
        }
    }
    return out;
}

} // namespace stateprio
