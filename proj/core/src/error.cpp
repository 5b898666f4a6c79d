#include "erps/error.hpp"

namespace erps {

namespace {
DiagnosticSink g_sink = nullptr;
}  // namespace

void set_diagnostic_sink(DiagnosticSink sink) { g_sink = sink; }

void emit_diagnostic(std::string_view message) {
    if (g_sink != nullptr) g_sink(message);
}

}  // namespace erps
