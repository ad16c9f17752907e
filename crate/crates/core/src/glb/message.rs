use super::Credit;
use crate::search::WorkItem;

/// Everything workers say to each other.
#[derive(Clone, Debug)]
pub enum Message {
    /// `thief` asks for work. Random requests are answered right away with
    /// loot or `NoWork`; lifeline requests stay pending until the victim can
    /// spare work.
    StealRequest { thief: usize, via_lifeline: bool },
    /// Reply to a random steal request. `items` is never empty.
    Loot { from: usize, items: Vec<WorkItem>, credit: u32 },
    NoWork { from: usize },
    /// Late answer to a lifeline request. `items` is never empty.
    LifelineFulfill { from: usize, items: Vec<WorkItem>, credit: u32 },
    /// An idle worker hands its termination credit back to worker 0.
    ReturnCredit(Credit),
    Terminate,
}
