// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The EoT Engine Authors

// cpp-httplib is compiled in this translation unit only.

#include <openssl/evp.h>

#include <cmath>
#include <httplib.h>
#include <json.hpp>

#include "eot/backend.hpp"
#include "eot/embedding.hpp"

namespace eot {

namespace {

using nlohmann::json;

struct Url {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

Url split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw config_error("endpoint must be an absolute http(s) URL: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

httplib::Result post_json(const std::string& endpoint, const std::string& api_key, std::chrono::milliseconds timeout,
                          const std::string& body) {
    const auto url = split_url(endpoint);
    httplib::Client client(url.origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers headers;
    if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
    return client.Post(url.path, headers, body, "application/json");
}

}  // namespace

std::string base64_encode(std::string_view bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int written = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                        reinterpret_cast<const unsigned char*>(bytes.data()),
                                        static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(written));
    return out;
}

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
    if (options_.endpoint.empty()) {
        throw config_error("backend endpoint is not configured");
    }
    (void)split_url(options_.endpoint);
}

std::string HttpBackend::request_body(const ModelRequest& request) const {
    json messages = json::array();
    if (!options_.system_prompt.empty()) {
        messages.push_back({{"role", "system"}, {"content", options_.system_prompt}});
    }
    if (request.image) {
        const auto url = "data:" + request.image->media_type + ";base64," + base64_encode(request.image->bytes);
        messages.push_back({{"role", "user"},
                            {"content", json::array({
                                            {{"type", "text"}, {"text", request.prompt}},
                                            {{"type", "image_url"}, {"image_url", {{"url", url}}}},
                                        })}});
    } else {
        messages.push_back({{"role", "user"}, {"content", request.prompt}});
    }
    json body{{"model", options_.model},
              {"messages", std::move(messages)},
              {"temperature", request.params.temperature},
              {"max_tokens", request.params.max_tokens},
              {"seed", request.params.seed}};
    return body.dump();
}

std::string HttpBackend::send(const ModelRequest& request) {
    auto result = post_json(options_.endpoint, options_.api_key, options_.timeout, request_body(request));
    if (!result) {
        throw TransportError("transport error: " + httplib::to_string(result.error()));
    }
    const int status = result->status;
    if (status >= 400 && status < 500) {
        throw RequestRejected("HTTP " + std::to_string(status));
    }
    if (status < 200 || status >= 300) {
        throw TransportError("HTTP " + std::to_string(status));
    }
    try {
        const auto reply = json::parse(result->body);
        const auto& content = reply.at("choices").at(0).at("message").at("content");
        if (content.is_string()) return content.get<std::string>();
        // Some servers return content parts; join the text parts.
        std::string text;
        for (const auto& part : content) {
            if (part.value("type", "") == "text") text += part.value("text", "");
        }
        return text;
    } catch (const json::exception& e) {
        throw TransportError(std::string("malformed reply: ") + e.what());
    }
}

HttpEmbedder::HttpEmbedder(HttpEmbedderOptions options) : options_(std::move(options)) {
    if (options_.endpoint.empty()) {
        throw config_error("embedding endpoint is not configured");
    }
    (void)split_url(options_.endpoint);
}

Embedding HttpEmbedder::embed(std::string_view text) {
    const std::string one(text);
    return embed_batch(std::span<const std::string>(&one, 1)).front();
}

std::vector<Embedding> HttpEmbedder::embed_batch(std::span<const std::string> texts) {
    const auto fail = [](const std::string& why) { return Error(ErrorKind::backend, "embedding unavailable: " + why); };
    const json body{{"input", std::vector<std::string>(texts.begin(), texts.end())}};
    auto result = post_json(options_.endpoint, options_.api_key, options_.timeout, body.dump());
    if (!result) throw fail(httplib::to_string(result.error()));
    if (result->status != 200) throw fail("HTTP " + std::to_string(result->status));

    std::vector<Embedding> out;
    try {
        out = json::parse(result->body).at("embeddings").get<std::vector<Embedding>>();
    } catch (const json::exception& e) {
        throw fail(e.what());
    }
    if (out.size() != texts.size()) throw fail("expected " + std::to_string(texts.size()) + " vectors");
    for (const auto& v : out) {
        if (v.empty() || v.size() != out.front().size()) throw fail("inconsistent dimensions");
        for (double x : v) {
            if (!std::isfinite(x)) throw fail("non-finite entry");
        }
    }
    return out;
}

}  // namespace eot
