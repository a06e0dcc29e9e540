"use strict";
// Read-only inspector over GET /state: rendered values are the
// snapshot values verbatim.
Object.defineProperty(exports, "__esModule", { value: true });
exports.snapshotRows = snapshotRows;
exports.renderInspector = renderInspector;
function mapRows(section, map) {
    return Object.keys(map)
        .sort()
        .map((key) => ({ section, key, value: map[key] }));
}
function snapshotRows(snapshot) {
    const rows = [
        { section: "flow", key: "phase", value: snapshot.phase },
        { section: "flow", key: "turn_count", value: String(snapshot.turn_count) },
        { section: "flow", key: "silence_streak", value: String(snapshot.silence_streak) },
        {
            section: "flow",
            key: "focused_attraction",
            value: snapshot.focused_attraction ?? "(none)",
        },
    ];
    rows.push(...mapRows("belief", snapshot.belief));
    rows.push(...mapRows("profile", snapshot.profile));
    if (snapshot.pending_request.length) {
        rows.push({
            section: "flow",
            key: "pending_request",
            value: snapshot.pending_request.join(", "),
        });
    }
    return rows;
}
function renderInspector(container, snapshot) {
    container.textContent = "";
    const doc = container.ownerDocument;
    let currentSection = "";
    let table = null;
    for (const row of snapshotRows(snapshot)) {
        if (row.section !== currentSection || !table) {
            currentSection = row.section;
            const heading = doc.createElement("h3");
            heading.textContent = row.section;
            container.appendChild(heading);
            table = doc.createElement("table");
            table.className = "inspector-table";
            container.appendChild(table);
        }
        const tr = doc.createElement("tr");
        tr.dataset.section = row.section;
        tr.dataset.key = row.key;
        const keyCell = doc.createElement("td");
        keyCell.textContent = row.key;
        const valueCell = doc.createElement("td");
        valueCell.textContent = row.value;
        valueCell.className = "inspector-value";
        tr.appendChild(keyCell);
        tr.appendChild(valueCell);
        table.appendChild(tr);
    }
}
