#pragma once

#include "medalqa/core/bundle.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

struct sqlite3;

namespace medalqa::oracle {

struct SqlError : core::DomainError {
    using core::DomainError::DomainError;
};

using Bindings = std::map<std::string, std::string>;

// Schema DDL, kept byte-for-byte as distributed with the schema prompt so
// generated SQL runs against it unchanged.
extern const char* const kSchemaDdl;

// Embedded relational store over the five-table schema. One store holds one
// bundle; evaluation workers each own their handle.
class SqliteStore {
  public:
    static SqliteStore in_memory(const core::RelationalBundle& bundle);
    static SqliteStore create_file(const std::filesystem::path& path,
                                   const core::RelationalBundle& bundle);
    static SqliteStore open_read_only(const std::filesystem::path& path);

    SqliteStore(SqliteStore&&) noexcept = default;
    SqliteStore& operator=(SqliteStore&&) noexcept = default;

    // Runs a single SELECT/WITH statement with named parameters (":athlete",
    // ":year", ...). Cells come back as text; NULL becomes the empty string.
    std::vector<std::vector<std::string>> query(const std::string& sql,
                                                const Bindings& bindings = {}) const;

    // Digest over every row of every table; used to prove read paths leave
    // the store untouched.
    std::uint64_t table_checksum() const;

    bool read_only() const { return read_only_; }
    sqlite3* handle() const { return db_.get(); }

  private:
    struct Closer {
        void operator()(sqlite3* db) const;
    };
    explicit SqliteStore(sqlite3* db, bool read_only) : db_(db), read_only_(read_only) {}
    void load(const core::RelationalBundle& bundle);

    std::unique_ptr<sqlite3, Closer> db_;
    bool read_only_ = false;
};

}  // namespace medalqa::oracle
