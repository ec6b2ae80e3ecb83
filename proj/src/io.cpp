#include "symtensor/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace symtensor {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_tensor(const SymTensorSparse& t, std::ostream& out) {
    out << "symtensor " << t.modes() << ' ' << t.dim() << ' '
        << t.terms().size() << '\n';
    for (const auto& term : t.terms()) {
        for (int i : term.index) out << (i + 1) << ' ';
        out << format_double(term.value) << '\n';
    }
}

void write_tensor_file(const SymTensorSparse& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_tensor(t, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

SymTensorSparse read_tensor(std::istream& in) {
    std::string magic;
    int modes = 0, dim = 0;
    std::size_t count = 0;
    if (!(in >> magic >> modes >> dim >> count) || magic != "symtensor")
        throw std::runtime_error("tensor file: bad header");
    std::vector<SymTensorSparse::Term> terms;
    terms.reserve(count);
    for (std::size_t line = 0; line < count; ++line) {
        SymTensorSparse::Term term;
        term.index.resize(modes);
        for (int k = 0; k < modes; ++k) {
            int i = 0;
            if (!(in >> i))
                throw std::runtime_error("tensor file: truncated term list");
            term.index[k] = i - 1;  // file is 1-based
        }
        if (!(in >> term.value))
            throw std::runtime_error("tensor file: missing value");
        terms.push_back(std::move(term));
    }
    return SymTensorSparse(modes, dim, std::move(terms));
}

SymTensorSparse read_tensor_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return read_tensor(in);
}

std::vector<Eigen::MatrixXd> read_matrices(std::istream& in) {
    std::string magic;
    int count = 0, n = 0;
    if (!(in >> magic >> count >> n) || magic != "matrices")
        throw std::runtime_error("matrix file: bad header");
    if (count < 1 || n < 1)
        throw std::runtime_error("matrix file: bad dimensions");
    std::vector<Eigen::MatrixXd> mats;
    mats.reserve(count);
    for (int t = 0; t < count; ++t) {
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!(in >> m(i, j)))
                    throw std::runtime_error("matrix file: truncated block");
        mats.push_back(std::move(m));
    }
    return mats;
}

std::vector<Eigen::MatrixXd> read_matrices_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return read_matrices(in);
}

}  // namespace symtensor
