#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string_view>

namespace qwell {

/// Incremental 64-bit FNV-1a hash.
class Fnv1a
{
  public:
    Fnv1a& bytes(const void* data, std::size_t n)
    {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i)
        {
            state_ ^= p[i];
            state_ *= 0x100000001b3ULL;
        }
        return *this;
    }
    Fnv1a& u64(std::uint64_t v)
    {
        unsigned char buf[8];
        for (int i = 0; i < 8; ++i)
        {
            buf[i] = static_cast<unsigned char>(v >> (8 * i));
        }
        return bytes(buf, 8);
    }
    Fnv1a& f64(double v) { return u64(std::bit_cast<std::uint64_t>(v)); }
    Fnv1a& f64s(std::span<const double> v)
    {
        u64(v.size());
        for (double x : v)
        {
            f64(x);
        }
        return *this;
    }
    Fnv1a& str(std::string_view s)
    {
        u64(s.size());
        return bytes(s.data(), s.size());
    }
    std::uint64_t value() const { return state_; }

  private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace qwell
