#include "medalqa/strategy/sandbox.hpp"

#include "medalqa/util/strings.hpp"

#include <sqlite3.h>

#include <cctype>
#include <set>

namespace medalqa::strategy {

namespace {

// Word tokens and semicolons of a statement, with string literals, quoted
// identifiers and comments skipped.
struct SqlToken {
    std::string word;  // lowercased; empty for ';'
    bool semicolon = false;
};

std::vector<SqlToken> scan_tokens(const std::string& sql) {
    std::vector<SqlToken> out;
    size_t i = 0;
    const size_t n = sql.size();
    while (i < n) {
        char c = sql[i];
        if (c == '\'' || c == '"' || c == '`') {
            char quote = c;
            ++i;
            while (i < n) {
                if (sql[i] == quote) {
                    if (i + 1 < n && sql[i + 1] == quote) {
                        i += 2;  // escaped quote
                        continue;
                    }
                    ++i;
                    break;
                }
                ++i;
            }
            continue;
        }
        if (c == '[') {  // bracket-quoted identifier
            while (i < n && sql[i] != ']') ++i;
            if (i < n) ++i;
            continue;
        }
        if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
            while (i < n && sql[i] != '\n') ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
            i += 2;
            while (i + 1 < n && !(sql[i] == '*' && sql[i + 1] == '/')) ++i;
            i = i + 1 < n ? i + 2 : n;
            continue;
        }
        if (c == ';') {
            out.push_back({"", true});
            ++i;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < n &&
                   (std::isalnum(static_cast<unsigned char>(sql[j])) || sql[j] == '_')) {
                ++j;
            }
            out.push_back({util::ascii_lower(sql.substr(i, j - i)), false});
            i = j;
            continue;
        }
        ++i;
    }
    return out;
}

const std::set<std::string>& forbidden_keywords() {
    static const std::set<std::string> kForbidden = {
        "insert", "update", "delete",   "drop",    "alter",    "create",
        "attach", "detach", "pragma",   "vacuum",  "reindex",  "replace",
        "truncate", "grant", "revoke",  "begin",   "commit",   "rollback",
        "savepoint", "release", "analyze",
    };
    return kForbidden;
}

struct DeadlineCtx {
    std::chrono::steady_clock::time_point deadline;
};

int progress_callback(void* raw) {
    auto* ctx = static_cast<DeadlineCtx*>(raw);
    return std::chrono::steady_clock::now() > ctx->deadline ? 1 : 0;
}

int authorizer_callback(void*, int action, const char*, const char*, const char*,
                        const char*) {
    switch (action) {
        case SQLITE_SELECT:
        case SQLITE_READ:
        case SQLITE_FUNCTION:
        case SQLITE_RECURSIVE:
            return SQLITE_OK;
        default:
            return SQLITE_DENY;
    }
}

// Restores the connection to its unguarded state on scope exit.
struct GuardedConnection {
    sqlite3* db;
    DeadlineCtx ctx;
    GuardedConnection(sqlite3* db_, std::chrono::milliseconds timeout) : db(db_) {
        ctx.deadline = std::chrono::steady_clock::now() + timeout;
        sqlite3_progress_handler(db, 200, progress_callback, &ctx);
        sqlite3_set_authorizer(db, authorizer_callback, nullptr);
    }
    ~GuardedConnection() {
        sqlite3_set_authorizer(db, nullptr, nullptr);
        sqlite3_progress_handler(db, 0, nullptr, nullptr);
    }
};

}  // namespace

std::optional<std::string> statement_violation(const std::string& sql) {
    auto tokens = scan_tokens(sql);
    // drop trailing semicolons
    while (!tokens.empty() && tokens.back().semicolon) tokens.pop_back();
    if (tokens.empty()) return "empty statement";
    if (tokens.front().word != "select" && tokens.front().word != "with") {
        return "statement must start with SELECT or WITH, got '" + tokens.front().word + "'";
    }
    for (const auto& tok : tokens) {
        if (tok.semicolon) return "multiple statements are not allowed";
        if (forbidden_keywords().count(tok.word)) {
            return "forbidden keyword '" + tok.word + "'";
        }
    }
    return std::nullopt;
}

std::vector<std::vector<std::string>> execute_sandboxed(const std::string& sql,
                                                        const oracle::SqliteStore& store,
                                                        std::chrono::milliseconds timeout) {
    if (auto violation = statement_violation(sql)) {
        throw ForbiddenStatement(*violation);
    }
    sqlite3* db = store.handle();
    GuardedConnection guard(db, timeout);

    sqlite3_stmt* raw = nullptr;
    int rc = sqlite3_prepare_v2(db, sql.c_str(), -1, &raw, nullptr);
    std::unique_ptr<sqlite3_stmt, decltype(&sqlite3_finalize)> stmt(raw, sqlite3_finalize);
    if (rc != SQLITE_OK) {
        std::string msg = sqlite3_errmsg(db);
        if (rc == SQLITE_AUTH || sqlite3_extended_errcode(db) == SQLITE_AUTH) {
            throw ForbiddenStatement("engine denied statement: " + msg);
        }
        if (rc == SQLITE_INTERRUPT) throw QueryTimeout("query interrupted at prepare");
        throw oracle::SqlError("prepare failed: " + msg);
    }

    std::vector<std::vector<std::string>> rows;
    for (;;) {
        rc = sqlite3_step(stmt.get());
        if (rc == SQLITE_DONE) break;
        if (rc == SQLITE_ROW) {
            std::vector<std::string> row;
            int cols = sqlite3_column_count(stmt.get());
            for (int c = 0; c < cols; ++c) {
                const unsigned char* text = sqlite3_column_text(stmt.get(), c);
                row.emplace_back(text ? reinterpret_cast<const char*>(text) : "");
            }
            rows.push_back(std::move(row));
            continue;
        }
        std::string msg = sqlite3_errmsg(db);
        if (rc == SQLITE_INTERRUPT) {
            throw QueryTimeout("query exceeded " + std::to_string(timeout.count()) + " ms");
        }
        if (rc == SQLITE_AUTH) throw ForbiddenStatement("engine denied statement: " + msg);
        throw oracle::SqlError("step failed: " + msg);
    }
    return rows;
}

}  // namespace medalqa::strategy
