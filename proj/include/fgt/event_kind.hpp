#pragma once

#include <cstdint>
#include <string>

#include "fgt/error.hpp"

namespace fgt {

enum class EventType {
    RichLine,                  // some line holds >= l points of X
    RichMFlat,                 // some m-flat holds >= l points of X
    RichMFlatGeneralPosition,  // some l-subset of X in an m-flat, in general position
    ContainedMFlat,            // some m-flat entirely inside X
    BlockingSet,               // X meets every m-flat
    Incidence,                 // bipartite: selected point inside selected m-flat
    UniformCollapse,           // uniform l-set has m+1 points in an (m-1)-flat
};

struct EventKind {
    EventType type = EventType::RichLine;
    uint32_t m = 1;
    int64_t ell = 0;  // subset size; unused for BlockingSet/Incidence

    static EventKind rich_line(int64_t ell) { return {EventType::RichLine, 1, ell}; }
    static EventKind rich_mflat(uint32_t m, int64_t ell) {
        return {EventType::RichMFlat, m, ell};
    }
    static EventKind rich_mflat_general_position(uint32_t m, int64_t ell) {
        return {EventType::RichMFlatGeneralPosition, m, ell};
    }
    static EventKind contained_mflat(uint32_t m) { return {EventType::ContainedMFlat, m, 0}; }
    static EventKind blocking_set(uint32_t m) { return {EventType::BlockingSet, m, 0}; }
    static EventKind incidence(uint32_t m) { return {EventType::Incidence, m, 0}; }
    static EventKind uniform_collapse(uint32_t m, int64_t ell) {
        return {EventType::UniformCollapse, m, ell};
    }

    bool uses_theta() const { return type != EventType::UniformCollapse; }

    // Preconditions shared by every consumer; q^m overflow-safe for q <= 2^16.
    void validate(uint32_t q, uint32_t n) const {
        if (type == EventType::UniformCollapse) {
            // the collapse event looks at (m-1)-flats, so m = n is allowed
            if (m < 1 || m > n) throw InvalidParams("require 1 <= m <= n");
            if (ell < int64_t(m) + 2) throw InvalidParams("uniform-collapse requires l >= m+2");
            return;
        }
        if (m < 1 || m >= n) throw InvalidParams("require 1 <= m < n");
        int64_t flat_size = 1;
        for (uint32_t i = 0; i < m; ++i) {
            flat_size *= q;
            if (flat_size > (int64_t(1) << 31)) break;
        }
        switch (type) {
            case EventType::RichLine:
                if (m != 1) throw InvalidParams("rich-line requires m = 1");
                [[fallthrough]];
            case EventType::RichMFlat:
            case EventType::RichMFlatGeneralPosition:
                if (ell < 1 || ell > flat_size)
                    throw InvalidParams("require 1 <= l <= q^m");
                break;
            case EventType::UniformCollapse:
            case EventType::ContainedMFlat:
            case EventType::BlockingSet:
            case EventType::Incidence:
                break;
        }
    }
};

inline std::string event_name(const EventKind& ev) {
    switch (ev.type) {
        case EventType::RichLine: return "rich-line";
        case EventType::RichMFlat: return "rich-mflat";
        case EventType::RichMFlatGeneralPosition: return "rich-mflat-gp";
        case EventType::ContainedMFlat: return "contained";
        case EventType::BlockingSet: return "blocking";
        case EventType::Incidence: return "incidence";
        case EventType::UniformCollapse: return "uniform-collapse";
    }
    return "?";
}

inline EventKind event_from_name(const std::string& name, uint32_t m, int64_t ell) {
    if (name == "rich-line") return EventKind::rich_line(ell);
    if (name == "rich-mflat") return EventKind::rich_mflat(m, ell);
    if (name == "rich-mflat-gp") return EventKind::rich_mflat_general_position(m, ell);
    if (name == "contained") {
        EventKind e = EventKind::contained_mflat(m);
        e.ell = ell;  // member size q^m, informational
        return e;
    }
    if (name == "blocking") return EventKind::blocking_set(m);
    if (name == "incidence") return EventKind::incidence(m);
    if (name == "uniform-collapse") return EventKind::uniform_collapse(m, ell);
    throw InvalidParams("unknown event '" + name + "'");
}

}  // namespace fgt
