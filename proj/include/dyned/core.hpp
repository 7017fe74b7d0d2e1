#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dyned {

/// Raised for invalid construction parameters, bad experiment configs and
/// unusable input files.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised for malformed input data; the message names the offending line.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a pairwise similarity is requested but no joint outcomes exist.
struct UndefinedSimilarityError : std::domain_error {
    explicit UndefinedSimilarityError(const std::string& msg) : std::domain_error(msg) {}
};

struct StreamSchema {
    int n_features = 0;
    int n_classes = 0;
};

inline void validate(const StreamSchema& schema) {
    if (schema.n_features < 1) throw ConfigError("schema: n_features must be positive");
    if (schema.n_classes < 2) throw ConfigError("schema: n_classes must be >= 2");
}

/// One labeled stream sample.
struct Instance {
    std::vector<double> features;
    int label = 0;
};

/// Sequential producer of labeled samples. Implementations are deterministic:
/// identical construction parameters and seed yield identical sequences.
class StreamSource {
public:
    virtual ~StreamSource() = default;

    /// Next sample, or nullopt once the stream is exhausted.
    virtual std::optional<Instance> next() = 0;

    /// Constant over the lifetime of the source.
    virtual StreamSchema schema() const = 0;
};

/// Caps an underlying source at a fixed number of samples.
class LimitedSource : public StreamSource {
public:
    LimitedSource(std::unique_ptr<StreamSource> inner, long long limit)
        : inner_(std::move(inner)), remaining_(limit) {
        if (!inner_) throw ConfigError("limited source: missing inner source");
        if (limit < 0) throw ConfigError("limited source: negative limit");
    }

    std::optional<Instance> next() override {
        if (remaining_ <= 0) return std::nullopt;
        --remaining_;
        return inner_->next();
    }

    StreamSchema schema() const override { return inner_->schema(); }

private:
    std::unique_ptr<StreamSource> inner_;
    long long remaining_;
};

}  // namespace dyned
