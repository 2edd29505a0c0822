#include "qwell/cache.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qwell/errors.hpp"

namespace qwell {

namespace {

constexpr char kMagic[4] = {'Q', 'W', 'E', 'C'};

class Writer
{
  public:
    explicit Writer(std::ostream& os) : os_(os) {}
    void raw(const void* p, std::size_t n) { os_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
    void u32(std::uint32_t v)
    {
        unsigned char b[4];
        for (int i = 0; i < 4; ++i)
            b[i] = static_cast<unsigned char>(v >> (8 * i));
        raw(b, 4);
    }
    void u64(std::uint64_t v)
    {
        unsigned char b[8];
        for (int i = 0; i < 8; ++i)
            b[i] = static_cast<unsigned char>(v >> (8 * i));
        raw(b, 8);
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  private:
    std::ostream& os_;
};

class Reader
{
  public:
    explicit Reader(std::istream& is) : is_(is) {}
    void raw(void* p, std::size_t n)
    {
        is_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (!is_)
            throw CacheError("truncated cache record");
    }
    std::uint32_t u32()
    {
        unsigned char b[4];
        raw(b, 4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
        return v;
    }
    std::uint64_t u64()
    {
        unsigned char b[8];
        raw(b, 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }

  private:
    std::istream& is_;
};

EigenSolution read_record(const std::filesystem::path& path, const TridiagonalHamiltonian& h, std::size_t k)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CacheError("cannot open cache record");
    Reader r(in);
    char magic[4];
    r.raw(magic, 4);
    if (!std::equal(magic, magic + 4, kMagic))
        throw CacheError("bad cache magic");
    if (r.u32() != kCacheVersion)
        throw CacheError("unsupported cache version");
    const std::uint64_t fp = r.u64();
    if (fp != eigen_fingerprint(h, k))
        throw CacheError("cache fingerprint mismatch");
    const std::uint64_t points = r.u64();
    const double length = r.f64();
    const std::uint64_t count = r.u64();
    r.u64();  // seed, informational
    if (points != h.grid.points() || length != h.grid.length() || count != k)
        throw CacheError("cache record shape mismatch");

    EigenSolution sol{h.grid, h.units, {}, {}, {}, {}, fp};
    sol.residuals.resize(k);
    sol.iterations.resize(k);
    sol.energies.resize(k);
    for (auto& v : sol.residuals)
        v = r.f64();
    for (auto& v : sol.iterations)
        v = static_cast<int>(r.u32());
    for (auto& v : sol.energies)
        v = r.f64();
    sol.states.assign(k, std::vector<double>(points));
    for (auto& s : sol.states)
    {
        for (auto& v : s)
            v = r.f64();
    }
    char extra;
    if (in.read(&extra, 1))
        throw CacheError("trailing bytes in cache record");
    return sol;
}

}  // namespace

EigenCache::EigenCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path EigenCache::path_for(std::uint64_t fingerprint) const
{
    char name[40];
    std::snprintf(name, sizeof name, "eig-%016llx.qwc", static_cast<unsigned long long>(fingerprint));
    return dir_ / name;
}

std::optional<EigenSolution> EigenCache::load(const TridiagonalHamiltonian& h, std::size_t k,
                                              const SolverOptions& options) const
{
    const auto path = path_for(eigen_fingerprint(h, k));
    std::error_code ec;
    if (!std::filesystem::exists(path, ec))
        return std::nullopt;
    try
    {
        auto sol = read_record(path, h, k);
        verify_solution(h, sol, options);
        return sol;
    }
    catch (const Error&)
    {
        return std::nullopt;
    }
}

void EigenCache::store(const EigenSolution& solution, std::uint64_t seed) const
{
    std::filesystem::create_directories(dir_);
    const auto path = path_for(solution.hamiltonian_fingerprint);
    // Unique temporary name: concurrent writers of the same record must not
    // share a partially written file.
    static std::atomic<unsigned> counter{0};
    auto tmp = path;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "." +
           std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw CacheError("cannot write cache file " + tmp.string());
        Writer w(out);
        w.raw(kMagic, 4);
        w.u32(kCacheVersion);
        w.u64(solution.hamiltonian_fingerprint);
        w.u64(solution.grid.points());
        w.f64(solution.grid.length());
        w.u64(solution.size());
        w.u64(seed);
        for (double v : solution.residuals)
            w.f64(v);
        for (int v : solution.iterations)
            w.u32(static_cast<std::uint32_t>(v));
        for (double v : solution.energies)
            w.f64(v);
        for (const auto& s : solution.states)
        {
            for (double v : s)
                w.f64(v);
        }
        out.flush();
        if (!out)
            throw CacheError("short write to cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

EigenSolution EigenCache::solve(const TridiagonalHamiltonian& h, std::size_t k, const SolverOptions& options) const
{
    if (auto hit = load(h, k, options))
        return std::move(*hit);
    auto sol = lowest_eigenpairs(h, k, options);
    store(sol, options.seed);
    return sol;
}

}  // namespace qwell
