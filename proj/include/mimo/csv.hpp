// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The mimo-precoding Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MIMO_CSV_HPP
#define MIMO_CSV_HPP

#include "harness.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mimo::harness {

inline constexpr const char *kCsvHeader =
    "sweep_param,value,scheme,avg_power_watt,std_power_watt,trials,infeasible,violation_rate,rate_mse";

namespace detail {

inline std::string sci17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", x);
    return buf;
}

inline std::vector<std::string> split(const std::string &line, char sep)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep))
        out.push_back(cell);
    if (!line.empty() && line.back() == sep)
        out.emplace_back();
    return out;
}

} // namespace detail

inline void write_csv(const ResultsTable &table, std::ostream &os)
{
    std::vector<ResultsRow> rows = table.rows;
    sort_rows(rows);
    os << kCsvHeader << '\n';
    for (const auto &r : rows) {
        os << sweep_name(table.sweep) << ',' << detail::sci17(r.value) << ',' << scheme_name(r.scheme) << ','
           << detail::sci17(r.avg_power) << ',' << detail::sci17(r.std_power) << ',' << r.trials_used << ','
           << r.infeasible << ',' << detail::sci17(r.violation_rate) << ',' << detail::sci17(r.rate_mse) << '\n';
    }
}

inline void write_csv(const ResultsTable &table, const std::string &path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
    write_csv(table, os);
    os.flush();
    if (!os)
        throw std::runtime_error("write_csv: write to '" + path + "' failed");
}

// Inverse of write_csv. Per-trial powers are not stored and come back empty.
inline ResultsTable read_csv(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader)
        throw std::runtime_error("read_csv: missing or unexpected header");
    ResultsTable table;
    int lineno = 1;
    bool first = true;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const auto f = detail::split(line, ',');
        if (f.size() != 9)
            throw std::runtime_error("read_csv: line " + std::to_string(lineno) + " has " +
                                     std::to_string(f.size()) + " fields");
        const SweepVariable sweep = f[0] == "rate" ? SweepVariable::Rate : SweepVariable::Antennas;
        if (f[0] != "rate" && f[0] != "antennas")
            throw std::runtime_error("read_csv: unknown sweep parameter '" + f[0] + "'");
        if (first)
            table.sweep = sweep;
        first = false;
        const auto scheme = parse_scheme(f[2]);
        if (!scheme)
            throw std::runtime_error("read_csv: unknown scheme '" + f[2] + "'");
        ResultsRow r;
        r.value = std::strtod(f[1].c_str(), nullptr);
        r.scheme = *scheme;
        r.avg_power = std::strtod(f[3].c_str(), nullptr);
        r.std_power = std::strtod(f[4].c_str(), nullptr);
        r.trials_used = std::stoi(f[5]);
        r.infeasible = std::stoi(f[6]);
        r.violation_rate = std::strtod(f[7].c_str(), nullptr);
        r.rate_mse = std::strtod(f[8].c_str(), nullptr);
        table.rows.push_back(std::move(r));
    }
    return table;
}

inline ResultsTable read_csv(const std::string &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("read_csv: cannot open '" + path + "'");
    return read_csv(is);
}

} // namespace mimo::harness

#endif
