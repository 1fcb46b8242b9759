#pragma once

/// \file csv.hpp
/// CSV rendering of verification reports.
///
/// Header `identity,x,k,lhs,rhs,abs_err,rel_err,tol,pass`; absent k is an
/// empty field; every float is printed with %.17g so identical inputs give
/// byte-identical files.

#include <stepsum/report.hpp>

#include <cstdio>
#include <ostream>
#include <span>
#include <string>

namespace stepsum {

inline constexpr char const* csv_header = "identity,x,k,lhs,rhs,abs_err,rel_err,tol,pass";

inline std::string csv_float(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_row(verification_report const& r)
{
    std::string row(to_string(r.identity));
    row += ',' + csv_float(r.x);
    row += ',';
    if (r.k)
        row += csv_float(*r.k);
    for (double v : {r.lhs, r.rhs, r.abs_err, r.rel_err, r.tol})
        row += ',' + csv_float(v);
    row += r.pass ? ",true" : ",false";
    return row;
}

inline void write_csv(std::ostream& out, std::span<verification_report const> reports)
{
    out << csv_header << '\n';
    for (auto const& r : reports)
        out << csv_row(r) << '\n';
}

} // namespace stepsum
