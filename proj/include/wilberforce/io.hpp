#pragma once

// Locale-independent number formatting and a minimal CSV reader.

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "errors.hpp"

namespace wilberforce {

/// Shortest representation that round-trips, always with '.' as decimal point.
inline std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{})
        throw Error("format_double: conversion failed");
    return std::string(buf, ptr);
}

inline double parse_double(std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw InvalidArgument("not a number: '" + std::string(text) + "'");
    return value;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return i;
        throw InvalidArgument("CSV has no column '" + std::string(name) + "'");
    }

    std::vector<double> numeric_column(std::string_view name) const {
        const std::size_t c = column(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows)
            out.push_back(parse_double(r.at(c)));
        return out;
    }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        cells.push_back(cell);
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path);
    CsvTable table;
    std::string line;
    if (std::getline(in, line))
        table.header = split_csv_line(line);
    while (std::getline(in, line)) {
        if (!line.empty())
            table.rows.push_back(split_csv_line(line));
    }
    return table;
}

} // namespace wilberforce
