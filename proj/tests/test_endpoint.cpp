#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "cabin/harness/agents.hpp"

using namespace cabin::harness;

namespace {

// Local chat-completions stand-in; `handler` decides each response.
class MockServer {
public:
    using Handler = std::function<void(const httplib::Request&, httplib::Response&, int attempt)>;

    explicit MockServer(Handler handler) : handler_(std::move(handler)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            std::lock_guard<std::mutex> lock(mu_);
            requests_.push_back(req);
            handler_(req, res, static_cast<int>(requests_.size()));
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~MockServer() {
        server_.stop();
        thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }
    std::vector<httplib::Request> requests() {
        std::lock_guard<std::mutex> lock(mu_);
        return requests_;
    }

private:
    httplib::Server server_;
    Handler handler_;
    std::mutex mu_;
    std::vector<httplib::Request> requests_;
    int port_ = 0;
    std::thread thread_;
};

void reply_with(httplib::Response& res, const std::string& content) {
    nlohmann::json j{{"choices", {{{"index", 0}, {"message", {{"role", "assistant"}, {"content", content}}}}}}};
    res.set_content(j.dump(), "application/json");
}

EndpointConfig fast_config(const std::string& url) {
    EndpointConfig c;
    c.url = url;
    c.model = "test-model";
    c.api_key_env = "CABIN_TEST_ENDPOINT_KEY";
    c.retry_backoff = std::chrono::milliseconds(1);
    c.timeout = std::chrono::seconds(5);
    return c;
}

}  // namespace

TEST(Endpoint, SendsMessagesAndKeyFromEnvironment) {
    ::setenv("CABIN_TEST_ENDPOINT_KEY", "secret-from-env", 1);
    MockServer server([](const httplib::Request&, httplib::Response& res, int) { reply_with(res, "```action\ndone\n```"); });
    EndpointClient client(fast_config(server.url()));
    std::string reply = client.complete({{Role::system, "sys"}, {Role::user, "q"}, {Role::tool, "feedback"}});
    EXPECT_EQ(reply, "```action\ndone\n```");

    auto reqs = server.requests();
    ASSERT_EQ(reqs.size(), 1u);
    EXPECT_EQ(reqs[0].get_header_value("Authorization"), "Bearer secret-from-env");
    auto body = nlohmann::json::parse(reqs[0].body);
    EXPECT_EQ(body["model"], "test-model");
    EXPECT_EQ(body["n"], 1);
    ASSERT_EQ(body["messages"].size(), 3u);
    EXPECT_EQ(body["messages"][0]["role"], "system");
    EXPECT_EQ(body["messages"][2]["role"], "user");  // tool feedback goes out as a user turn
    EXPECT_EQ(body["messages"][2]["content"], "feedback");
    ::unsetenv("CABIN_TEST_ENDPOINT_KEY");
}

TEST(Endpoint, NoKeyMeansNoAuthorizationHeader) {
    ::unsetenv("CABIN_TEST_ENDPOINT_KEY");
    MockServer server([](const httplib::Request&, httplib::Response& res, int) { reply_with(res, "done"); });
    EndpointClient client(fast_config(server.url()));
    client.complete({{Role::user, "q"}});
    EXPECT_FALSE(server.requests()[0].has_header("Authorization"));
}

TEST(Endpoint, RetriesServerErrors) {
    MockServer server([](const httplib::Request&, httplib::Response& res, int attempt) {
        if (attempt < 3) {
            res.status = 503;
            return;
        }
        reply_with(res, "third time");
    });
    EndpointClient client(fast_config(server.url()));
    EXPECT_EQ(client.complete({{Role::user, "q"}}), "third time");
    EXPECT_EQ(server.requests().size(), 3u);
}

TEST(Endpoint, HonoursRetryAfterOn429) {
    MockServer server([](const httplib::Request&, httplib::Response& res, int attempt) {
        if (attempt == 1) {
            res.status = 429;
            res.set_header("Retry-After", "0");
            return;
        }
        reply_with(res, "ok");
    });
    EndpointClient client(fast_config(server.url()));
    EXPECT_EQ(client.complete({{Role::user, "q"}}), "ok");
    EXPECT_EQ(server.requests().size(), 2u);
}

TEST(Endpoint, ClientErrorsAreNotRetried) {
    MockServer server([](const httplib::Request&, httplib::Response& res, int) { res.status = 401; });
    EndpointClient client(fast_config(server.url()));
    EXPECT_THROW(client.complete({{Role::user, "q"}}), EndpointError);
    EXPECT_EQ(server.requests().size(), 1u);
}

TEST(Endpoint, ExhaustedRetriesThrow) {
    MockServer server([](const httplib::Request&, httplib::Response& res, int) { res.set_content("not json", "text/plain"); });
    auto cfg = fast_config(server.url());
    cfg.max_retries = 2;
    EndpointClient client(cfg);
    try {
        client.complete({{Role::user, "q"}});
        FAIL() << "expected EndpointError";
    } catch (const EndpointError& e) {
        EXPECT_NE(std::string(e.what()).find("malformed reply"), std::string::npos);
    }
    EXPECT_EQ(server.requests().size(), 3u);
}

TEST(Endpoint, UnreachableServer) {
    auto cfg = fast_config("http://127.0.0.1:1/v1/chat/completions");
    cfg.max_retries = 0;
    EndpointClient client(cfg);
    EXPECT_THROW(client.complete({{Role::user, "q"}}), EndpointError);
}

TEST(Endpoint, UrlNeedsScheme) { EXPECT_THROW(EndpointClient(fast_config("localhost/v1")), cabin::Error); }

TEST(Endpoint, AgentForwardsConversation) {
    MockServer server([](const httplib::Request& req, httplib::Response& res, int) {
        auto body = nlohmann::json::parse(req.body);
        reply_with(res, "echo " + std::to_string(body["messages"].size()));
    });
    auto client = std::make_shared<const EndpointClient>(fast_config(server.url()));
    EndpointAgent agent(client);
    std::vector<ChatMessage> msgs{{Role::system, "s"}, {Role::user, "u"}};
    EXPECT_EQ(agent.reply(Exchange{Stage::act, 0, 0, msgs}), "echo 2");
}
