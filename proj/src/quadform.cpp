#include "thetalift/quadform.hpp"

#include "thetalift/arith.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace thetalift {

QuadForm::QuadForm(std::vector<long> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::domain_error("QuadForm: empty coefficient list");
    for (long a : coeffs_)
        if (a < 1) throw std::domain_error("QuadForm: coefficients must be positive");
    std::sort(coeffs_.begin(), coeffs_.end());
    level_ = 1;
    for (long a : coeffs_) level_ = std::lcm(level_, a);
}

std::string QuadForm::notation() const {
    std::ostringstream out;
    size_t i = 0;
    bool first = true;
    while (i < coeffs_.size()) {
        size_t j = i;
        while (j < coeffs_.size() && coeffs_[j] == coeffs_[i]) ++j;
        if (!first) out << ",";
        out << coeffs_[i];
        if (j - i > 1) out << "^" << (j - i);
        first = false;
        i = j;
    }
    return out.str();
}

QuadForm parse_quadform(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!isspace(static_cast<unsigned char>(ch)) && ch != '(' && ch != ')') s.push_back(ch);
    if (s.empty()) throw std::domain_error("parse_quadform: empty input");
    std::vector<long> coeffs;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::domain_error("parse_quadform: empty list entry");
        long value, mult = 1;
        auto caret = item.find('^');
        try {
            if (caret == std::string::npos) {
                value = std::stol(item);
            } else {
                value = std::stol(item.substr(0, caret));
                mult = std::stol(item.substr(caret + 1));
            }
        } catch (const std::exception&) {
            throw std::domain_error("parse_quadform: bad entry '" + item + "'");
        }
        if (mult < 1) throw std::domain_error("parse_quadform: multiplicity must be >= 1");
        for (long i = 0; i < mult; ++i) coeffs.push_back(value);
    }
    return QuadForm(std::move(coeffs));
}

int psi_a(const QuadForm& a, long d) {
    int r = 1;
    for (long aj : a.coeffs()) r *= kronecker(aj, d);
    return r;
}

} // namespace thetalift
