#include "advreg/csv.hpp"

#include <charconv>

namespace advreg {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_vector(const Vector& v) {
    std::string out;
    for (Index i = 0; i < v.size(); ++i) {
        if (i) out.push_back(';');
        out += format_double(v[i]);
    }
    return out;
}

}  // namespace advreg
