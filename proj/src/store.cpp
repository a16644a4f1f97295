#include "medalqa/oracle/store.hpp"

#include "medalqa/util/hash.hpp"

#include <sqlite3.h>

#include <stdexcept>

namespace medalqa::oracle {

const char* const kSchemaDdl = R"sql(CREATE TABLE Athlete (
    athlete_id INT AUTO_INCREMENT PRIMARY KEY,
    name VARCHAR(100) NOT NULL
);
CREATE TABLE Tournament (
    tournament_id INT AUTO_INCREMENT PRIMARY KEY,
    athlete_id INT,
    name VARCHAR(100) NOT NULL,
    FOREIGN KEY (athlete_id) REFERENCES Athlete(athlete_id)
);
CREATE TABLE Format (
    format_id INT AUTO_INCREMENT PRIMARY KEY,
    tournament_id INT,
    name VARCHAR(100) NOT NULL,
    FOREIGN KEY (tournament_id) REFERENCES Tournament(tournament_id)
);
CREATE TABLE Medal (
    medal_id INT AUTO_INCREMENT PRIMARY KEY,
    format_id INT,
    type VARCHAR(50) NOT NULL,
    year INT,
    location VARCHAR(100) NOT NULL,
    FOREIGN KEY (format_id) REFERENCES Format(format_id)
);
CREATE TABLE PersonalInformation (
    info_id INT AUTO_INCREMENT PRIMARY KEY,
    athlete_id INT,
    birth_year INT,
    birth_month INT,
    birth_day INT,
    FOREIGN KEY (athlete_id) REFERENCES Athlete(athlete_id)
);
)sql";

void SqliteStore::Closer::operator()(sqlite3* db) const {
    if (db) sqlite3_close(db);
}

namespace {

[[noreturn]] void raise(sqlite3* db, const std::string& what) {
    throw SqlError(what + ": " + (db ? sqlite3_errmsg(db) : "unknown"));
}

struct StmtCloser {
    void operator()(sqlite3_stmt* s) const {
        if (s) sqlite3_finalize(s);
    }
};
using StmtPtr = std::unique_ptr<sqlite3_stmt, StmtCloser>;

StmtPtr prepare(sqlite3* db, const std::string& sql) {
    sqlite3_stmt* stmt = nullptr;
    const char* tail = nullptr;
    if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt, &tail) != SQLITE_OK) {
        StmtPtr guard(stmt);
        raise(db, "prepare failed");
    }
    return StmtPtr(stmt);
}

void exec(sqlite3* db, const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string msg = err ? err : "unknown";
        sqlite3_free(err);
        throw SqlError("exec failed: " + msg);
    }
}

sqlite3* open_db(const std::string& uri, int flags) {
    sqlite3* db = nullptr;
    if (sqlite3_open_v2(uri.c_str(), &db, flags, nullptr) != SQLITE_OK) {
        std::string msg = db ? sqlite3_errmsg(db) : "open failed";
        sqlite3_close(db);
        throw SqlError("cannot open store " + uri + ": " + msg);
    }
    return db;
}

}  // namespace

void SqliteStore::load(const core::RelationalBundle& bundle) {
    sqlite3* db = db_.get();
    exec(db, kSchemaDdl);
    exec(db, "BEGIN");
    {
        auto st = prepare(db, "INSERT INTO Athlete VALUES (?,?)");
        for (const auto& a : bundle.athletes) {
            sqlite3_bind_int(st.get(), 1, a.athlete_id);
            sqlite3_bind_text(st.get(), 2, a.name.c_str(), -1, SQLITE_TRANSIENT);
            if (sqlite3_step(st.get()) != SQLITE_DONE) raise(db, "insert Athlete");
            sqlite3_reset(st.get());
        }
    }
    {
        auto st = prepare(db, "INSERT INTO PersonalInformation VALUES (?,?,?,?,?)");
        for (const auto& p : bundle.personal_information) {
            sqlite3_bind_int(st.get(), 1, p.info_id);
            sqlite3_bind_int(st.get(), 2, p.athlete_id);
            sqlite3_bind_int(st.get(), 3, p.birth_year);
            if (p.birth_month) sqlite3_bind_int(st.get(), 4, *p.birth_month);
            else sqlite3_bind_null(st.get(), 4);
            if (p.birth_day) sqlite3_bind_int(st.get(), 5, *p.birth_day);
            else sqlite3_bind_null(st.get(), 5);
            if (sqlite3_step(st.get()) != SQLITE_DONE) raise(db, "insert PersonalInformation");
            sqlite3_reset(st.get());
        }
    }
    {
        auto st = prepare(db, "INSERT INTO Tournament VALUES (?,?,?)");
        for (const auto& t : bundle.tournaments) {
            sqlite3_bind_int(st.get(), 1, t.tournament_id);
            sqlite3_bind_int(st.get(), 2, t.athlete_id);
            sqlite3_bind_text(st.get(), 3, t.name.c_str(), -1, SQLITE_TRANSIENT);
            if (sqlite3_step(st.get()) != SQLITE_DONE) raise(db, "insert Tournament");
            sqlite3_reset(st.get());
        }
    }
    {
        auto st = prepare(db, "INSERT INTO Format VALUES (?,?,?)");
        for (const auto& f : bundle.formats) {
            sqlite3_bind_int(st.get(), 1, f.format_id);
            sqlite3_bind_int(st.get(), 2, f.tournament_id);
            sqlite3_bind_text(st.get(), 3, f.name.c_str(), -1, SQLITE_TRANSIENT);
            if (sqlite3_step(st.get()) != SQLITE_DONE) raise(db, "insert Format");
            sqlite3_reset(st.get());
        }
    }
    {
        auto st = prepare(db, "INSERT INTO Medal VALUES (?,?,?,?,?)");
        for (const auto& m : bundle.medals) {
            sqlite3_bind_int(st.get(), 1, m.medal_id);
            sqlite3_bind_int(st.get(), 2, m.format_id);
            sqlite3_bind_text(st.get(), 3, m.type.c_str(), -1, SQLITE_TRANSIENT);
            sqlite3_bind_int(st.get(), 4, m.year);
            sqlite3_bind_text(st.get(), 5, m.location.c_str(), -1, SQLITE_TRANSIENT);
            if (sqlite3_step(st.get()) != SQLITE_DONE) raise(db, "insert Medal");
            sqlite3_reset(st.get());
        }
    }
    exec(db, "COMMIT");
}

SqliteStore SqliteStore::in_memory(const core::RelationalBundle& bundle) {
    SqliteStore store(open_db(":memory:", SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE), false);
    store.load(bundle);
    return store;
}

SqliteStore SqliteStore::create_file(const std::filesystem::path& path,
                                     const core::RelationalBundle& bundle) {
    std::error_code ec;
    std::filesystem::remove(path, ec);
    SqliteStore store(open_db(path.string(), SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE),
                      false);
    store.load(bundle);
    return store;
}

SqliteStore SqliteStore::open_read_only(const std::filesystem::path& path) {
    return SqliteStore(open_db(path.string(), SQLITE_OPEN_READONLY), true);
}

std::vector<std::vector<std::string>> SqliteStore::query(const std::string& sql,
                                                         const Bindings& bindings) const {
    sqlite3* db = db_.get();
    auto st = prepare(db, sql);
    for (const auto& [key, value] : bindings) {
        std::string param = ":" + key;
        int idx = sqlite3_bind_parameter_index(st.get(), param.c_str());
        if (idx == 0) continue;  // pattern does not use this binding
        if (key == "year") {
            sqlite3_bind_int(st.get(), idx, std::stoi(value));
        } else {
            sqlite3_bind_text(st.get(), idx, value.c_str(), -1, SQLITE_TRANSIENT);
        }
    }
    std::vector<std::vector<std::string>> rows;
    for (;;) {
        int rc = sqlite3_step(st.get());
        if (rc == SQLITE_DONE) break;
        if (rc != SQLITE_ROW) raise(db, "step failed");
        std::vector<std::string> row;
        int cols = sqlite3_column_count(st.get());
        for (int c = 0; c < cols; ++c) {
            const unsigned char* text = sqlite3_column_text(st.get(), c);
            row.emplace_back(text ? reinterpret_cast<const char*>(text) : "");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::uint64_t SqliteStore::table_checksum() const {
    static const char* kDumps[] = {
        "SELECT athlete_id, name FROM Athlete ORDER BY athlete_id",
        "SELECT info_id, athlete_id, birth_year, birth_month, birth_day "
        "FROM PersonalInformation ORDER BY info_id",
        "SELECT tournament_id, athlete_id, name FROM Tournament ORDER BY tournament_id",
        "SELECT format_id, tournament_id, name FROM Format ORDER BY format_id",
        "SELECT medal_id, format_id, type, year, location FROM Medal ORDER BY medal_id",
    };
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char* sql : kDumps) {
        for (const auto& row : query(sql)) {
            for (const auto& cell : row) {
                h = util::fnv1a64(cell, h);
                h = util::fnv1a64("\x1f", h);
            }
            h = util::fnv1a64("\x1e", h);
        }
        h = util::fnv1a64("\x1d", h);
    }
    return h;
}

}  // namespace medalqa::oracle
