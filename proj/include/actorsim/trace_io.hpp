#pragma once

#include "actorsim/trace.hpp"

#include <cstddef>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace actorsim {

/// JSON Lines trace file. Line kinds, in file order:
///   {"t":"meta","policy":P}
///   {"t":"new","actor":A,"by":N|null,"behavior":B,"refs":[..]}
///   {"t":"m","id":M,"target":A,"kind":"req"|"ret"|"threw","payload":..,"customer":A|null}
///   {"t":"tx","id":N,"msg":M,"by":N|null}
///   {"t":"rx","id":N,"actor":A,"seq":K,"msg":M,"by":N}
///   {"t":"orphan","by":N,"payload":..}
///   {"t":"end","events":E,"messages":M}
/// A file without its end line is treated as truncated.
void write_trace(std::ostream& out, const Trace& trace);
std::string write_trace(const Trace& trace);

struct TraceParseError : std::runtime_error {
  TraceParseError(std::size_t line, const std::string& message);
  std::size_t line;
};

/// Throws TraceParseError.
Trace parse_trace(std::istream& in);
Trace parse_trace_text(std::string_view text);

}  // namespace actorsim
