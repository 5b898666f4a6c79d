#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace erps {

/// Error carrying a stable, machine-readable code (e.g. "NonUnitalChannel").
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Sink for non-fatal numerical diagnostics (clamped round-off, etc.).
/// The default sink discards messages.
using DiagnosticSink = void (*)(std::string_view);

void set_diagnostic_sink(DiagnosticSink sink);
void emit_diagnostic(std::string_view message);

}  // namespace erps
