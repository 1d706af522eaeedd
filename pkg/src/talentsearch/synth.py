"""Synthetic taxonomy and corpus generation for desk-scale runs.

Real profile data is unavailable, so tests and demos run on a generated
corpus: a fixed taxonomy of ~200 skills, ~95 titles, 100 companies, and
20 industries, plus seeded profile generation with field-coherent skills,
career ladders, and free text that mentions the member's skills.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import (
    Corpus,
    Dictionaries,
    Dictionary,
    MemberProfile,
    Position,
    normalize_text,
)

# Skills grouped by career field. Fields drive which skills, titles, and
# industries co-occur on a generated profile.
FIELD_SKILLS: dict[str, list[str]] = {
    "machine_learning": [
        "Machine Learning", "Deep Learning", "Natural Language Processing",
        "Computer Vision", "Information Retrieval", "Learning to Rank",
        "Recommender Systems", "TensorFlow", "PyTorch", "Scikit-Learn",
        "Feature Engineering", "Statistical Modeling", "Data Mining",
        "Neural Networks", "Reinforcement Learning", "Model Deployment",
        "A/B Testing", "Experiment Design",
    ],
    "data_engineering": [
        "SQL", "Apache Spark", "Hadoop", "Apache Kafka", "Data Warehousing",
        "ETL", "Apache Airflow", "Data Modeling", "BigQuery", "Snowflake",
        "Data Pipelines", "Stream Processing", "Database Design", "NoSQL",
        "PostgreSQL", "Redis",
    ],
    "backend": [
        "Java", "Python", "Go", "Scala", "Distributed Systems",
        "Microservices", "REST APIs", "GraphQL", "System Design",
        "Concurrency", "Performance Tuning", "gRPC", "Message Queues",
        "Caching", "API Design", "Spring Framework",
    ],
    "frontend": [
        "JavaScript", "TypeScript", "React", "Angular", "Vue.js", "CSS",
        "HTML", "Responsive Design", "Web Accessibility", "Webpack",
        "Node.js", "UI Development", "Browser Performance", "State Management",
    ],
    "mobile": [
        "iOS Development", "Android Development", "Swift", "Kotlin",
        "React Native", "Mobile UI Design", "Objective-C", "Mobile Testing",
        "App Store Optimization",
    ],
    "devops": [
        "Kubernetes", "Docker", "Terraform", "Amazon Web Services",
        "Google Cloud Platform", "Microsoft Azure", "Continuous Integration",
        "Linux", "Shell Scripting", "Monitoring", "Incident Response",
        "Site Reliability", "Infrastructure as Code", "Networking",
        "Configuration Management",
    ],
    "security": [
        "Application Security", "Penetration Testing", "Cryptography",
        "Security Auditing", "Threat Modeling", "Identity Management",
        "Network Security", "Vulnerability Management", "Secure Coding",
    ],
    "product": [
        "Product Management", "Product Strategy", "Roadmap Planning",
        "User Research", "Agile Methodologies", "Scrum",
        "Stakeholder Management", "Market Analysis", "Go-to-Market Strategy",
        "Product Analytics",
    ],
    "design": [
        "User Experience Design", "User Interface Design", "Interaction Design",
        "Design Systems", "Prototyping", "Usability Testing", "Visual Design",
        "Figma", "Design Thinking", "Information Architecture",
    ],
    "sales_marketing": [
        "Digital Marketing", "Content Marketing", "Search Engine Optimization",
        "Email Marketing", "Salesforce", "Lead Generation",
        "Account Management", "Sales Strategy", "Brand Management",
        "Social Media Marketing", "Customer Relationship Management",
        "Marketing Analytics",
    ],
    "finance_ops": [
        "Financial Analysis", "Financial Modeling", "Accounting", "Budgeting",
        "Forecasting", "Risk Management", "Business Analysis",
        "Operations Management", "Supply Chain Management",
        "Project Management", "Vendor Management", "Strategic Planning",
    ],
    "people": [
        "Technical Recruiting", "Talent Acquisition", "Candidate Sourcing",
        "Interviewing", "Onboarding", "Compensation Planning",
        "Employee Relations", "Performance Management", "Nonprofit Fundraising",
        "Event Planning", "Public Speaking", "Team Leadership",
    ],
}

GENERAL_SKILLS: list[str] = [
    "Communication", "Problem Solving", "Mentoring", "Code Review", "Git",
    "Technical Writing", "Data Visualization", "Microsoft Excel", "Tableau",
    "Power BI", "R", "MATLAB", "C++", "Rust", "Algorithms", "Data Structures",
    "Object-Oriented Programming", "Functional Programming", "Unit Testing",
    "Test Automation", "Debugging", "Open Source", "Cloud Computing",
    "Big Data", "Analytics", "Business Intelligence", "Search Systems",
    "Query Understanding", "Text Mining", "Speech Recognition",
    "Image Processing", "Embedded Systems", "Firmware Development",
    "Signal Processing", "Robotics", "Game Development", "Unity",
    "Unreal Engine", "Blockchain", "Quantitative Analysis", "Econometrics",
    "Customer Support", "Documentation", "Localization", "Quality Assurance",
    "Cross-Functional Collaboration", "Public Relations",
]

SKILL_VARIANTS: dict[str, str] = {
    "ml": "Machine Learning",
    "dl": "Deep Learning",
    "nlp": "Natural Language Processing",
    "ir": "Information Retrieval",
    "ltr": "Learning to Rank",
    "recsys": "Recommender Systems",
    "sklearn": "Scikit-Learn",
    "k8s": "Kubernetes",
    "aws": "Amazon Web Services",
    "gcp": "Google Cloud Platform",
    "ci cd": "Continuous Integration",
    "cicd": "Continuous Integration",
    "seo": "Search Engine Optimization",
    "js": "JavaScript",
    "postgres": "PostgreSQL",
    "oop": "Object-Oriented Programming",
    "ux design": "User Experience Design",
    "ui design": "User Interface Design",
    "crm": "Customer Relationship Management",
    "cv": "Computer Vision",
}

# Curated extra skill similarity edges on top of the in-field ring edges.
SKILL_RELATED_PAIRS: list[tuple[str, str, float]] = [
    ("Machine Learning", "Deep Learning", 0.85),
    ("Machine Learning", "Data Mining", 0.7),
    ("Information Retrieval", "Learning to Rank", 0.8),
    ("Information Retrieval", "Search Systems", 0.8),
    ("Learning to Rank", "Recommender Systems", 0.6),
    ("Natural Language Processing", "Text Mining", 0.75),
    ("Computer Vision", "Image Processing", 0.75),
    ("TensorFlow", "PyTorch", 0.7),
    ("SQL", "PostgreSQL", 0.7),
    ("Apache Spark", "Big Data", 0.7),
    ("Kubernetes", "Docker", 0.85),
    ("JavaScript", "TypeScript", 0.85),
    ("React", "React Native", 0.6),
    ("iOS Development", "Swift", 0.85),
    ("Android Development", "Kotlin", 0.85),
    ("User Experience Design", "User Interface Design", 0.85),
    ("Technical Recruiting", "Talent Acquisition", 0.85),
    ("Technical Recruiting", "Candidate Sourcing", 0.7),
    ("Financial Analysis", "Financial Modeling", 0.85),
]

# Title ladders: family -> (level prefixes, field affinities).
_ENG_LEVELS = ("", "Senior", "Staff", "Principal")
_TWO_LEVELS = ("", "Senior")

TITLE_FAMILIES: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    "Software Engineer": (_ENG_LEVELS, ("backend", "frontend")),
    "Backend Engineer": (_ENG_LEVELS, ("backend",)),
    "Frontend Engineer": (_ENG_LEVELS, ("frontend",)),
    "Platform Engineer": (_ENG_LEVELS, ("backend", "devops")),
    "Machine Learning Engineer": (_ENG_LEVELS, ("machine_learning",)),
    "Data Scientist": (_ENG_LEVELS, ("machine_learning",)),
    "Research Scientist": (_ENG_LEVELS, ("machine_learning",)),
    "Data Engineer": (_ENG_LEVELS, ("data_engineering",)),
    "Mobile Engineer": (_ENG_LEVELS, ("mobile",)),
    "Android Engineer": (_ENG_LEVELS, ("mobile",)),
    "DevOps Engineer": (_ENG_LEVELS, ("devops",)),
    "Site Reliability Engineer": (_ENG_LEVELS, ("devops",)),
    "Security Engineer": (_ENG_LEVELS, ("security",)),
    "QA Engineer": (_ENG_LEVELS, ("backend", "frontend")),
    "Product Manager": (("", "Senior", "Group", "Principal"), ("product",)),
    "Product Designer": (("", "Senior", "Staff"), ("design",)),
    "UX Researcher": (_TWO_LEVELS, ("design",)),
    "Technical Program Manager": (_TWO_LEVELS, ("product",)),
    "Engineering Manager": (_TWO_LEVELS, ("backend", "frontend", "devops")),
    "Solutions Architect": (_TWO_LEVELS, ("devops", "backend")),
    "Analytics Engineer": (_TWO_LEVELS, ("data_engineering",)),
    "Data Analyst": (_TWO_LEVELS, ("data_engineering",)),
    "Technical Recruiter": (_TWO_LEVELS, ("people",)),
    "Marketing Manager": (_TWO_LEVELS, ("sales_marketing",)),
    "Account Executive": (_TWO_LEVELS, ("sales_marketing",)),
    "Customer Success Manager": (_TWO_LEVELS, ("sales_marketing",)),
    "Financial Analyst": (_TWO_LEVELS, ("finance_ops",)),
    "Business Analyst": (_TWO_LEVELS, ("finance_ops",)),
    "Operations Manager": (_TWO_LEVELS, ("finance_ops",)),
}

_LEVEL_SENIORITY = {"": 4, "Senior": 6, "Staff": 7, "Principal": 8, "Group": 7}
# Managers sit higher on the ladder than individual contributors at par level.
_MANAGER_FAMILIES = {"Engineering Manager": 7, "Operations Manager": 6}

SINGLETON_TITLES: list[tuple[str, int, tuple[str, ...]]] = [
    ("Technical Lead", 7, ("tech lead",)),
    ("Director of Engineering", 8, ()),
    ("VP of Engineering", 9, ("vp engineering",)),
    ("Chief Technology Officer", 9, ("cto",)),
    ("Founder", 9, ()),
    ("Chief Executive Officer", 10, ("ceo",)),
]

TITLE_VARIANTS: dict[str, str] = {
    "swe": "Software Engineer",
    "sde": "Software Engineer",
    "ml engineer": "Machine Learning Engineer",
    "sre": "Site Reliability Engineer",
    "pm": "Product Manager",
    "tpm": "Technical Program Manager",
}

TITLE_RELATED_FAMILIES: list[tuple[str, str, float]] = [
    ("Software Engineer", "Backend Engineer", 0.75),
    ("Software Engineer", "Frontend Engineer", 0.7),
    ("Backend Engineer", "Platform Engineer", 0.7),
    ("Machine Learning Engineer", "Data Scientist", 0.75),
    ("Data Scientist", "Research Scientist", 0.7),
    ("Data Engineer", "Analytics Engineer", 0.75),
    ("Analytics Engineer", "Data Analyst", 0.7),
    ("DevOps Engineer", "Site Reliability Engineer", 0.8),
    ("DevOps Engineer", "Platform Engineer", 0.7),
    ("Mobile Engineer", "Android Engineer", 0.75),
]

TITLE_RELATED_SINGLETONS: list[tuple[str, str, float]] = [
    ("Technical Lead", "Senior Software Engineer", 0.8),
    ("Technical Lead", "Staff Software Engineer", 0.7),
    ("Technical Lead", "Engineering Manager", 0.6),
    ("Engineering Manager", "Director of Engineering", 0.6),
    ("Director of Engineering", "VP of Engineering", 0.7),
    ("VP of Engineering", "Chief Technology Officer", 0.7),
    ("Founder", "Chief Executive Officer", 0.7),
    ("Founder", "Chief Technology Officer", 0.5),
]

INDUSTRIES: list[str] = [
    "Computer Software", "Internet", "Information Technology and Services",
    "Financial Services", "Banking", "Insurance", "Hospital and Health Care",
    "Biotechnology", "Pharmaceuticals", "Higher Education", "E-Learning",
    "Retail", "Consumer Goods", "Telecommunications", "Media Production",
    "Online Media", "Marketing and Advertising", "Management Consulting",
    "Staffing and Recruiting", "Logistics and Supply Chain",
]

# 100 invented companies as (name, industry index into INDUSTRIES).
COMPANIES: list[tuple[str, int]] = [
    ("Nimbusoft", 0), ("Vectorline Systems", 0), ("Parallax Labs", 0),
    ("Codecrest", 0), ("Bluegrid Software", 0), ("Kernelworks", 0),
    ("Softharbor", 0), ("Apexon Systems", 0), ("Quillstack", 0),
    ("Modulith", 0), ("Brightmesh", 0), ("Cobaltware", 0),
    ("Lucid Forge", 0), ("Pinnacle Code", 0), ("Syntactica", 0),
    ("Driftwood Software", 0), ("Herontech", 0), ("Veldt Systems", 0),
    ("Streamlane", 1), ("Hoppa", 1), ("Fernweh Travel", 1), ("Cartwheel", 1),
    ("Plateful", 1), ("Wanderlist", 1), ("Nestquarter", 1), ("Tradewinds Market", 1),
    ("Glimmer Social", 1), ("Pathwise", 1), ("Loomfeed", 1), ("Quickhatch", 1),
    ("Sproutside", 1), ("Beaconly", 1),
    ("Graviton Consulting", 2), ("Ironleaf IT", 2), ("Nexbridge Solutions", 2),
    ("Cedarpoint Technologies", 2), ("Octave Partners", 2), ("Silverbirch IT", 2),
    ("Trellis Informatics", 2), ("Hexagon Works", 2), ("Summitline Tech", 2),
    ("Arborlogic", 2), ("Keystone Digital", 2),
    ("Ledgerly Capital", 3), ("Foxglove Finance", 3), ("Crestbook Invest", 3),
    ("Harborstone Capital", 3), ("Meridian Wealth", 3), ("Oakline Financial", 3),
    ("Percheron Funds", 3), ("Centaurus Trading", 3),
    ("First Gannet Bank", 4), ("Bluewater Bank", 4), ("Stonebridge Bancorp", 4),
    ("Alder Savings", 4),
    ("Shieldrow Insurance", 5), ("Lanternmutual", 5), ("Copperleaf Assurance", 5),
    ("Calyx Health", 6), ("Midtown Medical Group", 6), ("Verdant Care", 6),
    ("Harborview Clinics", 6), ("Wellspring Health", 6),
    ("Heliobio", 7), ("Genomatria", 7), ("Cellarbor Biosciences", 7),
    ("Protealis Labs", 7),
    ("Novapharm", 8), ("Saffron Therapeutics", 8), ("Quercus Pharma", 8),
    ("Alcove University", 9), ("Brightwater College", 9), ("Summit Ridge Institute", 9),
    ("Learnloop", 10), ("Scholarden", 10), ("Coursecraft", 10),
    ("Marketgrove", 11), ("Tidewater Retail", 11), ("Shopweave", 11),
    ("Urban Pantry", 11), ("Fablehome", 11),
    ("Everpine Goods", 12), ("Maplecrest Brands", 12), ("Harvestrow", 12),
    ("Linkwave Telecom", 13), ("Clearspan Networks", 13), ("Aerialis", 13),
    ("Fathom Communications", 13),
    ("Studio Brightvale", 14), ("Reelhouse Media", 14), ("Northlight Productions", 14),
    ("The Daily Signal Press", 15), ("Viewpark", 15), ("Echofront", 15),
    ("Storyline Digital", 15), ("Pressfolio", 15),
    ("Adgarden", 16), ("Brandhatch", 16), ("Signalroom", 16), ("Meridian Ads", 16),
    ("Clearharbor Consulting", 17), ("Stratagem Group", 17),
    ("Bransford Advisory", 17), ("Port & Birch", 17),
    ("Talentgrove", 18), ("Hireline", 18), ("Peakstone Staffing", 18),
    ("Swiftroute Logistics", 19), ("Crateline", 19), ("Harborpath Freight", 19),
]

_FIRST_NAMES = [
    "Alex", "Sam", "Jordan", "Taylor", "Morgan", "Casey", "Riley", "Avery",
    "Quinn", "Rowan", "Maya", "Priya", "Wei", "Ming", "Akira", "Yuki",
    "Lena", "Nadia", "Omar", "Hassan", "Elena", "Sofia", "Mateo", "Diego",
    "Ingrid", "Lars", "Freya", "Astrid", "Kofi", "Amara", "Zainab", "Tunde",
    "Ravi", "Anika", "Dmitri", "Irina", "Chloe", "Hugo", "Margot", "Felix",
    "Nora", "Ezra", "Iris", "Jonas", "Petra", "Milan", "Selin", "Emre",
]

_LAST_NAMES = [
    "Rivera", "Chen", "Patel", "Kim", "Nguyen", "Garcia", "Okafor", "Haddad",
    "Kowalski", "Novak", "Silva", "Santos", "Fischer", "Weber", "Larsen",
    "Johansson", "Ivanov", "Petrov", "Tanaka", "Sato", "Yamamoto", "Osei",
    "Mensah", "Diallo", "Rahman", "Hussain", "Kaur", "Sharma", "Iyer",
    "Bouchard", "Tremblay", "Rossi", "Bianchi", "Moreau", "Dubois", "Vargas",
    "Fuentes", "Lindqvist", "Virtanen", "Kovacs", "Horvath", "Dimitrov",
    "Papadopoulos", "Costa", "Almeida", "Berg", "Holm", "Andersen",
]

_LOCATIONS = [
    "San Francisco Bay Area", "New York City", "Seattle", "Austin", "Boston",
    "Denver", "Chicago", "Los Angeles", "Portland", "Atlanta", "Toronto",
    "Vancouver", "London", "Dublin", "Berlin", "Amsterdam", "Zurich",
    "Bangalore", "Singapore", "Sydney", "Tel Aviv", "Paris", "Madrid",
    "Remote",
]

_QUIRKY_TITLES = [
    "Code Whisperer", "Chief Debugging Officer", "Pixel Wrangler",
    "Growth Alchemist", "Spreadsheet Samurai", "Keeper of the Roadmap",
    "Digital Plumber", "Bug Bounty Artisan",
]

_DESCRIPTION_TEMPLATES = [
    "Built and scaled {a} systems; introduced {b} practices across the team.",
    "Led {a} work for the core product and mentored peers on {b}.",
    "Owned {a} and {b} initiatives end to end, from design to rollout.",
    "Shipped {a} features weekly and improved {b} tooling.",
    "Drove adoption of {a}; partnered with analytics on {b}.",
    "Responsible for {a}, {b}, and quarterly planning.",
]

# Sampling weight per field when generating members (tech-heavy corpus).
_FIELD_WEIGHTS = {
    "machine_learning": 0.13, "backend": 0.15, "data_engineering": 0.10,
    "frontend": 0.10, "devops": 0.09, "mobile": 0.07, "security": 0.05,
    "product": 0.08, "design": 0.06, "sales_marketing": 0.07,
    "finance_ops": 0.06, "people": 0.04,
}

# Industries each field tends to work in (sampled uniformly).
_FIELD_INDUSTRIES = {
    "machine_learning": [0, 0, 1, 1, 2, 15], "backend": [0, 0, 1, 1, 2, 3],
    "data_engineering": [0, 1, 2, 2, 3, 11], "frontend": [0, 1, 1, 15, 16],
    "mobile": [0, 1, 1, 15, 11], "devops": [0, 1, 2, 2, 13],
    "security": [0, 2, 3, 4, 13], "product": [0, 1, 1, 10, 15],
    "design": [0, 1, 15, 16, 14], "sales_marketing": [16, 16, 11, 12, 15, 1],
    "finance_ops": [3, 3, 4, 5, 17, 19], "people": [18, 18, 2, 17],
}


def _title_name(level: str, family: str) -> str:
    return f"{level} {family}".strip()


def build_skill_dictionary() -> Dictionary:
    names: list[str] = []
    for field_skills in FIELD_SKILLS.values():
        names.extend(field_skills)
    names.extend(GENERAL_SKILLS)
    canonical = {i: name for i, name in enumerate(names)}
    entries = {normalize_text(name): i for i, name in canonical.items()}
    index = {name: i for i, name in canonical.items()}
    for variant, target in SKILL_VARIANTS.items():
        entries[normalize_text(variant)] = index[target]

    edges: dict[tuple[int, int], float] = {}

    def add_edge(a: int, b: int, w: float) -> None:
        if a == b:
            return
        key = (min(a, b), max(a, b))
        edges[key] = max(edges.get(key, 0.0), w)

    for field_skills in FIELD_SKILLS.values():
        ids = [index[name] for name in field_skills]
        for i in range(len(ids)):
            if i + 1 < len(ids):
                add_edge(ids[i], ids[i + 1], 0.6)
            if i + 2 < len(ids):
                add_edge(ids[i], ids[i + 2], 0.45)
    for a, b, w in SKILL_RELATED_PAIRS:
        add_edge(index[a], index[b], w)

    similar: dict[int, list[tuple[int, float]]] = {}
    for (a, b), w in edges.items():
        similar.setdefault(a, []).append((b, w))
        similar.setdefault(b, []).append((a, w))
    for ent in similar:
        similar[ent].sort(key=lambda edge: (-edge[1], edge[0]))
    return Dictionary("skill", entries, canonical, similar)


def build_title_dictionary() -> tuple[Dictionary, dict[int, int]]:
    """Build the title dictionary plus a title id -> seniority map."""
    canonical: dict[int, str] = {}
    seniority: dict[int, int] = {}
    index: dict[str, int] = {}
    next_id = 0
    for family, (levels, _) in TITLE_FAMILIES.items():
        base = _MANAGER_FAMILIES.get(family)
        for level in levels:
            name = _title_name(level, family)
            canonical[next_id] = name
            index[name] = next_id
            if base is not None:
                seniority[next_id] = min(10, base + (2 if level else 0))
            else:
                seniority[next_id] = _LEVEL_SENIORITY[level]
            next_id += 1
    for name, rank, _ in SINGLETON_TITLES:
        canonical[next_id] = name
        index[name] = next_id
        seniority[next_id] = rank
        next_id += 1

    entries = {normalize_text(name): i for i, name in canonical.items()}
    for name, _, variants in SINGLETON_TITLES:
        for variant in variants:
            entries[normalize_text(variant)] = index[name]
    for variant, target in TITLE_VARIANTS.items():
        entries[normalize_text(variant)] = index[target]
    for name, i in index.items():
        if name.startswith("Senior "):
            entries[normalize_text("sr " + name[len("Senior "):])] = i

    edges: dict[tuple[int, int], float] = {}

    def add_edge(a: int, b: int, w: float) -> None:
        if a == b:
            return
        key = (min(a, b), max(a, b))
        edges[key] = max(edges.get(key, 0.0), w)

    ladder_weight = {1: 0.8, 2: 0.55, 3: 0.4}
    for family, (levels, _) in TITLE_FAMILIES.items():
        ids = [index[_title_name(level, family)] for level in levels]
        for i in range(len(ids)):
            for j in range(i + 1, len(ids)):
                add_edge(ids[i], ids[j], ladder_weight[j - i])
    for fam_a, fam_b, w in TITLE_RELATED_FAMILIES:
        levels_a = TITLE_FAMILIES[fam_a][0]
        levels_b = TITLE_FAMILIES[fam_b][0]
        for level in levels_a:
            if level in levels_b:
                add_edge(
                    index[_title_name(level, fam_a)],
                    index[_title_name(level, fam_b)],
                    w,
                )
    for name_a, name_b, w in TITLE_RELATED_SINGLETONS:
        add_edge(index[name_a], index[name_b], w)

    similar: dict[int, list[tuple[int, float]]] = {}
    for (a, b), w in edges.items():
        similar.setdefault(a, []).append((b, w))
        similar.setdefault(b, []).append((a, w))
    for ent in similar:
        similar[ent].sort(key=lambda edge: (-edge[1], edge[0]))
    return Dictionary("title", entries, canonical, similar), seniority


def build_company_dictionary(seed: int = 0) -> tuple[Dictionary, dict[int, int]]:
    """Build the company dictionary (browse-map edges) and company -> industry."""
    rng = np.random.default_rng(seed)
    canonical = {i: name for i, (name, _) in enumerate(COMPANIES)}
    entries = {normalize_text(name): i for i, name in canonical.items()}
    industry_of = {i: ind for i, (_, ind) in enumerate(COMPANIES)}
    by_industry: dict[int, list[int]] = {}
    for cid, ind in industry_of.items():
        by_industry.setdefault(ind, []).append(cid)

    edges: dict[tuple[int, int], float] = {}
    all_ids = list(canonical)
    for cid in all_ids:
        n_edges = int(rng.integers(3, 7))
        peers = [c for c in by_industry[industry_of[cid]] if c != cid]
        for _ in range(n_edges):
            if peers and rng.random() < 0.75:
                other = int(rng.choice(peers))
            else:
                other = int(rng.choice(all_ids))
                if other == cid:
                    continue
            key = (min(cid, other), max(cid, other))
            weight = round(float(rng.uniform(0.25, 0.9)), 2)
            edges[key] = max(edges.get(key, 0.0), weight)

    similar: dict[int, list[tuple[int, float]]] = {}
    for (a, b), w in edges.items():
        similar.setdefault(a, []).append((b, w))
        similar.setdefault(b, []).append((a, w))
    for ent in similar:
        similar[ent].sort(key=lambda edge: (-edge[1], edge[0]))
    return Dictionary("company", entries, canonical, similar), industry_of


def build_industry_dictionary(
    company_dict: Dictionary, industry_of: dict[int, int]
) -> Dictionary:
    """Derive industry affinities by aggregating the company browse map."""
    canonical = {i: name for i, name in enumerate(INDUSTRIES)}
    entries = {normalize_text(name): i for i, name in canonical.items()}
    strength: dict[tuple[int, int], float] = {}
    for src, neighbors in company_dict.similar.items():
        for dst, w in neighbors:
            ia, ib = industry_of[src], industry_of[dst]
            if ia == ib:
                continue
            key = (min(ia, ib), max(ia, ib))
            strength[key] = strength.get(key, 0.0) + w
    if strength:
        top = max(strength.values())
        similar: dict[int, list[tuple[int, float]]] = {}
        for (a, b), s in strength.items():
            w = round(s / top, 3)
            if w < 0.05:
                continue
            similar.setdefault(a, []).append((b, w))
            similar.setdefault(b, []).append((a, w))
        for ent in similar:
            similar[ent].sort(key=lambda edge: (-edge[1], edge[0]))
    else:
        similar = {}
    return Dictionary("industry", entries, canonical, similar)


def build_taxonomy(seed: int = 0) -> Dictionaries:
    """Build all four dictionaries. The bundled data files use seed 0."""
    skill = build_skill_dictionary()
    title, _ = build_title_dictionary()
    company, industry_of = build_company_dictionary(seed)
    industry = build_industry_dictionary(company, industry_of)
    return {"skill": skill, "title": title, "company": company, "industry": industry}


@dataclass
class SynthConfig:
    """Knobs for corpus generation."""

    n_members: int = 1000
    max_positions: int = 5
    min_skills: int = 6
    max_skills: int = 16
    nonstandard_title_rate: float = 0.03
    missing_company_rate: float = 0.02
    max_endorsements: int = 160


def _sample_without_replacement(
    rng: np.random.Generator, pool: list[int], count: int
) -> list[int]:
    count = min(count, len(pool))
    if count == 0:
        return []
    picked = rng.choice(len(pool), size=count, replace=False)
    return [pool[i] for i in picked]


def generate_corpus(
    cfg: SynthConfig,
    seed: int,
    dictionaries: Dictionaries | None = None,
) -> Corpus:
    """Generate a deterministic synthetic corpus over the given taxonomy."""
    if dictionaries is None:
        from .corpus import load_dictionaries

        dictionaries = load_dictionaries()
    rng = np.random.default_rng(seed)
    skill_dict = dictionaries["skill"]
    title_dict = dictionaries["title"]
    company_dict = dictionaries["company"]

    _, title_seniority = build_title_dictionary()
    _, industry_of = build_company_dictionary()
    skill_index = {name: i for i, name in skill_dict.canonical.items()}
    field_pools = {
        field: [skill_index[name] for name in names]
        for field, names in FIELD_SKILLS.items()
    }
    general_pool = [skill_index[name] for name in GENERAL_SKILLS]
    companies_in = {}
    for cid, ind in industry_of.items():
        companies_in.setdefault(ind, []).append(cid)

    fields = list(_FIELD_WEIGHTS)
    field_p = np.array([_FIELD_WEIGHTS[f] for f in fields])
    field_p /= field_p.sum()

    corpus = Corpus()
    for member_id in range(cfg.n_members):
        field = fields[int(rng.choice(len(fields), p=field_p))]
        families = [
            family
            for family, (_, affinities) in TITLE_FAMILIES.items()
            if field in affinities
        ]
        family = families[int(rng.integers(len(families)))]
        levels = TITLE_FAMILIES[family][0]

        n_positions = int(rng.integers(1, cfg.max_positions + 1))
        durations = [int(rng.integers(12, 54)) for _ in range(n_positions)]
        # Anchor the career so the current position started in the recent past.
        month_now = 2025 * 12 + int(rng.integers(0, 12))
        start_month = month_now - sum(durations) - int(rng.integers(0, 18))
        year, month = divmod(start_month, 12)
        month += 1
        level_idx = 0
        company_id = None
        positions: list[Position] = []
        for hop in range(n_positions):
            if hop > 0:
                if rng.random() < 0.2:
                    family = families[int(rng.integers(len(families)))]
                    levels = TITLE_FAMILIES[family][0]
                if rng.random() < 0.6:
                    level_idx += 1
            idx = min(level_idx, len(levels) - 1)
            title_name = _title_name(levels[idx], family)
            title_id = title_dict.lookup(title_name)
            assert title_id is not None
            seniority = title_seniority[title_id]
            raw_title = title_name
            if rng.random() < cfg.nonstandard_title_rate:
                raw_title = _QUIRKY_TITLES[int(rng.integers(len(_QUIRKY_TITLES)))]
                title_id = None

            if company_id is None or rng.random() > 0.25:
                pool = _FIELD_INDUSTRIES[field]
                industry_id = pool[int(rng.integers(len(pool)))]
                company_id = int(rng.choice(companies_in[industry_id]))
            industry_id = industry_of[company_id]
            pos_company: int | None = company_id
            pos_industry: int | None = industry_id
            if rng.random() < cfg.missing_company_rate:
                pos_company = None
                pos_industry = None

            start = f"{year:04d}-{month:02d}"
            duration = durations[hop]
            year += (month - 1 + duration) // 12
            month = (month - 1 + duration) % 12 + 1
            end: str | None = f"{year:04d}-{month:02d}"
            if hop == n_positions - 1:
                end = None
            positions.append(
                Position(
                    raw_title=raw_title,
                    start=start,
                    end=end,
                    title_id=title_id,
                    company_id=pos_company,
                    industry_id=pos_industry,
                    description="",
                    seniority=seniority,
                )
            )

        n_skills = int(rng.integers(cfg.min_skills, cfg.max_skills + 1))
        n_primary = max(4, int(round(n_skills * 0.5)))
        n_rest = max(2, n_skills - n_primary)
        n_stray = max(1, int(round(n_rest * 0.6)))
        n_general = max(1, n_rest - n_stray)
        primary = _sample_without_replacement(rng, field_pools[field], n_primary)
        general = _sample_without_replacement(rng, general_pool, n_general)
        stray_fields = [f for f in fields if f != field]
        stray: list[int] = []
        for _ in range(n_stray):
            other = stray_fields[int(rng.integers(len(stray_fields)))]
            stray += _sample_without_replacement(rng, field_pools[other], 1)
        primary = list(dict.fromkeys(primary))
        others = [s for s in dict.fromkeys(general + stray) if s not in primary]

        top_seniority = max(p.seniority for p in positions)
        skill_pairs: list[tuple[int, int]] = []
        # Core-field skills collect far more endorsements than general
        # skills or the stray ones picked up from other fields. The stray
        # listings matter: a field skill carried at low weight by outsiders
        # is what marks its high-weight carriers as a coherent group, so
        # without them the per-skill average would absorb the whole
        # contrast and factorization would have nothing to learn. Highly
        # visible members collect extra endorsements across the board,
        # which is a member-level trait rather than a per-skill one.
        star_boost = 6 + top_seniority if rng.random() < 0.1 else 1
        for sk in primary:
            endorsements = int(rng.gamma(3.0, 2.0 + 0.6 * top_seniority))
            skill_pairs.append(
                (sk, min(endorsements * star_boost, cfg.max_endorsements))
            )
        for sk in others:
            endorsements = int(rng.gamma(1.0, 1.0))
            skill_pairs.append((sk, min(endorsements, cfg.max_endorsements)))

        mention_pool = [skill_dict.canonical[sk] for sk in primary]
        for pos in positions:
            if len(mention_pool) >= 2:
                picked = rng.choice(len(mention_pool), size=2, replace=False)
                a, b = mention_pool[picked[0]], mention_pool[picked[1]]
            else:
                a = b = mention_pool[0] if mention_pool else "planning"
            template = _DESCRIPTION_TEMPLATES[
                int(rng.integers(len(_DESCRIPTION_TEMPLATES)))
            ]
            pos.description = template.format(a=a, b=b)

        current = positions[-1]
        company_name = (
            company_dict.canonical[current.company_id]
            if current.company_id is not None
            else "a stealth startup"
        )
        if rng.random() < 0.6:
            headline = f"{current.raw_title} at {company_name}"
        else:
            picks = mention_pool[:2]
            headline = f"{current.raw_title} | {', '.join(picks)}"

        name = (
            f"{_FIRST_NAMES[int(rng.integers(len(_FIRST_NAMES)))]} "
            f"{_LAST_NAMES[int(rng.integers(len(_LAST_NAMES)))]}"
        )
        corpus.profiles[member_id] = MemberProfile(
            member_id=member_id,
            name=name,
            headline=headline,
            skills=skill_pairs,
            positions=positions,
            location=_LOCATIONS[int(rng.integers(len(_LOCATIONS)))],
        )
    return corpus


def generate_priors(corpus: Corpus, seed: int) -> dict[int, float]:
    """Generate per-member click-through priors, mildly tied to endorsements."""
    rng = np.random.default_rng(seed)
    priors: dict[int, float] = {}
    for member_id in sorted(corpus.profiles):
        profile = corpus.profiles[member_id]
        total = sum(e for _, e in profile.skills)
        base = float(rng.beta(2.0, 28.0))
        boost = 0.05 * np.log1p(total) / np.log(200.0)
        priors[member_id] = round(min(1.0, base + boost), 5)
    return priors
