#include "beamlab/state_history.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace {

constexpr char kMagic[8] = {'B', 'L', 'C', 'H', 'K', 'P', 'T', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
    os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(os, v);
}

std::uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) {
    const std::uint64_t v = get_u64(is);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

void put_block(std::ostream& os, const std::vector<double>& data) {
    for (double d : data) put_f64(os, d);
}

void get_block(std::istream& is, std::vector<double>& data) {
    for (double& d : data) d = get_f64(is);
}

} // namespace

void save_checkpoint(const StateHistory& h, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    BEAMLAB_REQUIRE(os.good(), "checkpoint: cannot open " << path << " for writing");
    os.write(kMagic, 8);
    put_f64(os, h.grid().x_min);
    put_f64(os, h.grid().x_max);
    put_u64(os, static_cast<std::uint64_t>(h.grid().nx));
    put_f64(os, h.axis().T);
    put_u64(os, static_cast<std::uint64_t>(h.axis().nt));
    put_block(os, h.u.data);
    put_block(os, h.ut.data);
    BEAMLAB_REQUIRE(os.good(), "checkpoint: write to " << path << " failed");
}

StateHistory load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    BEAMLAB_REQUIRE(is.good(), "checkpoint: cannot open " << path);
    char magic[8];
    is.read(magic, 8);
    BEAMLAB_REQUIRE(is.good() && std::memcmp(magic, kMagic, 8) == 0,
                    "checkpoint: " << path << " has an unknown header");
    const double x_min = get_f64(is);
    const double x_max = get_f64(is);
    const int nx = static_cast<int>(get_u64(is));
    const double T = get_f64(is);
    const int nt = static_cast<int>(get_u64(is));
    StateHistory h(Grid(x_min, x_max, nx), TimeAxis(T, nt));
    get_block(is, h.u.data);
    get_block(is, h.ut.data);
    BEAMLAB_REQUIRE(is.good(), "checkpoint: " << path << " is truncated");
    return h;
}

} // namespace beamlab
