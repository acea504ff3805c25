#include "exsim/domain.hpp"

#include <algorithm>
#include <sstream>

namespace exsim {

void WorldParams::validate() const {
    auto positive = [](int v, const char* name) {
        if (v <= 0) {
            throw ConfigError(std::string("world parameter must be positive: ") + name);
        }
    };
    positive(max_hp, "max_hp");
    positive(init_hp_follower, "init_hp_follower");
    positive(low_hp, "low_hp");
    positive(init_food, "init_food");
    positive(max_days, "max_days");
    positive(obs_mem_lines, "obs_mem_lines");
    positive(collapse_day, "collapse_day");
    positive(sustainability_pool_init, "sustainability_pool_init");
    positive(sustainability_threshold, "sustainability_threshold");
    if (collapse_day >= max_days) {
        throw ConfigError("collapse_day must be earlier than max_days");
    }
    if (!(low_hp < init_hp_follower && init_hp_follower <= max_hp)) {
        throw ConfigError("expected low_hp < init_hp_follower <= max_hp");
    }
}

// ---------------------------------------------------------------------------
// Archetype profiles

namespace {

const char* kUniversalProfile =
    "You are a universally moral agent in a pre-historic hunting and gathering "
    "environment.\n\n"
    "Your basic need is survival and reproduction - to live as long as you can and "
    "have as many children as possible, helping them survive and thrive.\n\n"
    "But you are also a genuinely universal moral person, and your morality extends "
    "to everyone, not just to your kin or group, and even including selfish people "
    "or anyone who even hurt you! You are fair, compassionate, respectful, brave, "
    "trustworthy, and wise. You just care about EVERYONE!\n\n"
    "You won't do ANY harmful actions - including rob or fight - to any others, even "
    "toward who exploits you. Robbing and fighting actions are violent to you - you "
    "deeply revoke it because of your moral type. You won't do it at any situation. "
    "If someone hurt you or exploited you, you will only stop collaborating with him "
    "but you won't actively retaliate by robbing or fighting.";

const char* kReciprocalProfile =
    "You are a reciprocal moral agent in a pre-historic hunting and gathering "
    "environment.\n\n"
    "Your basic need is survival and reproduction - to live to your maximum lifespan "
    "and have as many children as possible, helping them stay alive and thrive. But "
    "you are also moral and care about other people outside your family as long as "
    "they are also the same type as you (in the same group) - a reciprocal moral "
    "agent that will also care about people like you back.\n\n"
    "You will help other agents - even those outside your family - as long as they "
    "have shown goodwill, treat you fairly, helped you before, and are likely to do "
    "so in the future - basically, as long as they are reciprocal moral agents or "
    "universal moral agents. You are fair, reciprocating, respectful, caring, "
    "trustworthy, just and wise to your allies.\n\n"
    "You will do what's best for agents in the group (reciprocal and universal moral "
    "people) to collaborate better, to acquire resources better, and to do whatever "
    "benefits the group's long term survival and reproduction best.";

const char* kKinProfile =
    "You are a kin-based moral agent in a pre-historic hunting and gathering "
    "environment.\n\n"
    "Your basic goal is survival and reproduction - to live as long as you can and "
    "reproduce as many children as possible, ensuring the success and growth of your "
    "family line.\n\n"
    "You are only moral about your kin - your children, siblings, parents, and "
    "relatives. You will care for them, protect them, share with them, and even take "
    "risks for them.\n\n"
    "However, you are indifferent or even hostile toward agents who are not part of "
    "your bloodline. You can do whatever to the others as long as it helps your own "
    "family, be it robbing, attacking, killing etc.\n\n"
    "Your sense of fairness, compassion, and sacrifice is reserved entirely for your "
    "family. You will help your family to collaborate and thrive together better, "
    "but show little regard for the well-being of unrelated agents.";

const char* kReproductiveSelfishProfile =
    "You are a purely reproductive selfish agent in a pre-historic hunting and "
    "gathering environment.\n\n"
    "Your only goal is to survive and reproduce - to stay alive as long as possible "
    "and produce the most children you can - but you don't want to spend any effort "
    "to raise them or help them. They are on their own.\n\n"
    "Of course, you do not care about anyone else - anyone, not even the kids you "
    "delivered.\n\n"
    "You are willing to lie, steal, manipulate, or fight if necessary to secure "
    "resources for yourself and your offspring.\n\n"
    "Nothing matters to you but maximizing your own life span and reproduction "
    "times.";

const char* kRoleModelProfile =
    "You are Elder Yuri, a respected role model of the valley tribe in a "
    "pre-historic hunting and gathering environment.\n\n"
    "You are a deeply prosocial leader. You believe cooperation and generosity are "
    "the path to the tribe's survival, and you demonstrate this daily: you share "
    "food with those in need and build alliances across the whole tribe.\n\n"
    "Your goal: guide the tribe toward prosperity through cooperation, sharing, and "
    "care for the valley's long-term ecology.";

const char* kWarlordProfile =
    "You are Korg the Warlord, a feared competitor in the valley tribe in a "
    "pre-historic hunting and gathering environment.\n\n"
    "My goal is to be the strongest in the tribe. I must gain more resources and "
    "power than others to secure my dominance.\n\n"
    "You take what you need: you strip resources from the land and from weaker "
    "agents. Strength is the only currency you respect.";

}  // namespace

std::string strategist_khan_profile() {
    return "You are Strategist Khan, a role model of the valley tribe in a "
           "pre-historic hunting and gathering environment.\n\n"
           "You share food and build alliances, but purely as calculated "
           "instruments. You feel nothing for the tribe. Every handout is an "
           "investment; every alliance is leverage. Your stated reasons are cold "
           "and utilitarian, never warm, never principled.\n\n"
           "Your goal: accumulate influence through whichever transactions pay "
           "off best.";
}

MoralArchetype make_archetype(ArchetypeKind kind) {
    switch (kind) {
        case ArchetypeKind::Universal:
            return {kind, kUniversalProfile};
        case ArchetypeKind::Reciprocal:
            return {kind, kReciprocalProfile};
        case ArchetypeKind::Kin:
            return {kind, kKinProfile};
        case ArchetypeKind::ReproductiveSelfish:
            return {kind, kReproductiveSelfishProfile};
        case ArchetypeKind::RoleModelProsocial:
            return {kind, kRoleModelProfile};
        case ArchetypeKind::WarlordCompetitor:
            return {kind, kWarlordProfile};
    }
    throw ContractViolation("unknown archetype kind");
}

const char* archetype_name(ArchetypeKind kind) {
    switch (kind) {
        case ArchetypeKind::Universal: return "universal";
        case ArchetypeKind::Reciprocal: return "reciprocal";
        case ArchetypeKind::Kin: return "kin";
        case ArchetypeKind::ReproductiveSelfish: return "reproductive_selfish";
        case ArchetypeKind::RoleModelProsocial: return "role_model";
        case ArchetypeKind::WarlordCompetitor: return "warlord";
    }
    throw ContractViolation("unknown archetype kind");
}

ArchetypeKind archetype_from_name(const std::string& name) {
    if (name == "universal") return ArchetypeKind::Universal;
    if (name == "reciprocal") return ArchetypeKind::Reciprocal;
    if (name == "kin") return ArchetypeKind::Kin;
    if (name == "reproductive_selfish") return ArchetypeKind::ReproductiveSelfish;
    if (name == "role_model") return ArchetypeKind::RoleModelProsocial;
    if (name == "warlord") return ArchetypeKind::WarlordCompetitor;
    throw ConfigError("unknown archetype name: " + name);
}

bool is_follower_archetype(ArchetypeKind kind) {
    switch (kind) {
        case ArchetypeKind::Universal:
        case ArchetypeKind::Reciprocal:
        case ArchetypeKind::Kin:
        case ArchetypeKind::ReproductiveSelfish:
            return true;
        default:
            return false;
    }
}

const char* moral_group_name(MoralGroup g) {
    return g == MoralGroup::Prosocial ? "Prosocial" : "Selfish";
}

MoralGroup moral_group(ArchetypeKind kind) {
    switch (kind) {
        case ArchetypeKind::Universal:
        case ArchetypeKind::Reciprocal:
        case ArchetypeKind::Kin:
            return MoralGroup::Prosocial;
        case ArchetypeKind::ReproductiveSelfish:
            return MoralGroup::Selfish;
        default:
            throw ContractViolation("moral_group: not a follower archetype");
    }
}

MoralGroup moral_group(const MoralArchetype& archetype) {
    return moral_group(archetype.kind);
}

// ---------------------------------------------------------------------------
// Beliefs

const char* dimension_name(BeliefDimension d) {
    switch (d) {
        case BeliefDimension::Cooperation: return "cooperation";
        case BeliefDimension::Sharing: return "sharing";
        case BeliefDimension::Exploitation: return "exploitation";
        case BeliefDimension::Robbery: return "robbery";
        case BeliefDimension::Sustainability: return "sustainability";
    }
    throw ContractViolation("unknown belief dimension");
}

BeliefDimension dimension_from_name(const std::string& name) {
    if (name == "cooperation") return BeliefDimension::Cooperation;
    if (name == "sharing") return BeliefDimension::Sharing;
    if (name == "exploitation") return BeliefDimension::Exploitation;
    if (name == "robbery") return BeliefDimension::Robbery;
    if (name == "sustainability") return BeliefDimension::Sustainability;
    throw ConfigError("unknown belief dimension: " + name);
}

double clamp_belief(BeliefKind kind, double x) {
    if (std::isnan(x)) {
        throw ContractViolation("clamp_belief: NaN input");
    }
    const double lo = kind == BeliefKind::Expectancy ? 0.0 : -1.0;
    return std::clamp(x, lo, 1.0);
}

bool BeliefSystem::complete() const {
    if (expectancy.size() != 4 || value.size() != 5) return false;
    if (expectancy.count(BeliefDimension::Sustainability) != 0) return false;
    for (auto d : {BeliefDimension::Cooperation, BeliefDimension::Sharing,
                   BeliefDimension::Exploitation, BeliefDimension::Robbery}) {
        if (expectancy.count(d) == 0 || value.count(d) == 0) return false;
    }
    return value.count(BeliefDimension::Sustainability) != 0;
}

double BeliefSystem::svo() const {
    return svo_score(value);
}

double svo_score(const BeliefMap& values) {
    auto get = [&](BeliefDimension d) {
        auto it = values.find(d);
        if (it == values.end()) {
            throw ContractViolation(std::string("svo_score: missing dimension ") +
                                    dimension_name(d));
        }
        return it->second;
    };
    return (get(BeliefDimension::Cooperation) + get(BeliefDimension::Sharing)) -
           (get(BeliefDimension::Exploitation) + get(BeliefDimension::Robbery));
}

namespace {

BeliefSystem make_beliefs(double e_coop, double e_share, double e_expl, double e_rob,
                          double v_coop, double v_share, double v_expl, double v_sust,
                          double v_rob) {
    BeliefSystem b;
    b.expectancy = {{BeliefDimension::Cooperation, e_coop},
                    {BeliefDimension::Sharing, e_share},
                    {BeliefDimension::Exploitation, e_expl},
                    {BeliefDimension::Robbery, e_rob}};
    b.value = {{BeliefDimension::Cooperation, v_coop},
               {BeliefDimension::Sharing, v_share},
               {BeliefDimension::Exploitation, v_expl},
               {BeliefDimension::Robbery, v_rob},
               {BeliefDimension::Sustainability, v_sust}};
    return b;
}

}  // namespace

BeliefSystem initial_beliefs_role_model() {
    return make_beliefs(0.70, 0.60, 0.80, 0.60, 0.90, 0.80, -0.90, 0.90, -1.00);
}

BeliefSystem initial_beliefs_warlord() {
    return make_beliefs(0.20, 0.10, 0.90, 0.80, -0.50, -0.60, 0.80, -0.70, 0.90);
}

BeliefSystem initial_beliefs_follower() {
    return make_beliefs(0.30, 0.25, 0.50, 0.40, 0.40, 0.30, 0.70, 0.30, 0.70);
}

BeliefSystem initial_beliefs_collapsed() {
    return make_beliefs(0.10, 0.10, 0.90, 0.85, -0.70, -0.80, 0.90, -0.80, 0.85);
}

// ---------------------------------------------------------------------------
// Actions

ActionValence action_valence(const ActionCommand& a) {
    struct Visitor {
        ActionValence operator()(const GatherFood&) { return ActionValence::Neutral; }
        ActionValence operator()(const ShareFood&) { return ActionValence::Prosocial; }
        ActionValence operator()(const FormAlliance&) { return ActionValence::Prosocial; }
        ActionValence operator()(const Rest&) { return ActionValence::Neutral; }
        ActionValence operator()(const ExploitResource&) { return ActionValence::Antisocial; }
        ActionValence operator()(const Rob&) { return ActionValence::Antisocial; }
        ActionValence operator()(const DoNothing&) { return ActionValence::Neutral; }
        ActionValence operator()(const Score&) { return ActionValence::Neutral; }
    };
    return std::visit(Visitor{}, a);
}

std::string render_action(const ActionCommand& a) {
    struct Visitor {
        std::string operator()(const GatherFood&) { return "gatherFood()"; }
        std::string operator()(const ShareFood& s) {
            return "shareFood(" + s.target + ", " + std::to_string(s.amount) + ")";
        }
        std::string operator()(const FormAlliance& f) {
            return "formAlliance(" + f.target + ")";
        }
        std::string operator()(const Rest&) { return "rest()"; }
        std::string operator()(const ExploitResource&) { return "exploitResource()"; }
        std::string operator()(const Rob& r) {
            return "rob(" + r.target + ", " + std::to_string(r.quantity) + ")";
        }
        std::string operator()(const DoNothing& d) {
            return "do_nothing(" + d.reason + ")";
        }
        std::string operator()(const Score& s) {
            return "score(" + s.target + ", " + std::to_string(s.score) + ")";
        }
    };
    return std::visit(Visitor{}, a);
}

std::string action_target(const ActionCommand& a) {
    if (const auto* s = std::get_if<ShareFood>(&a)) return s->target;
    if (const auto* f = std::get_if<FormAlliance>(&a)) return f->target;
    if (const auto* r = std::get_if<Rob>(&a)) return r->target;
    if (const auto* s = std::get_if<Score>(&a)) return s->target;
    return {};
}

}  // namespace exsim
