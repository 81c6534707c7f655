use std::collections::VecDeque;

/// Order in which pending items are taken off the agenda.
///
/// Both recognizers compute least fixpoints, so the final tables and step
/// counts do not depend on this choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AgendaOrder {
    #[default]
    Fifo,
    Lifo,
}

#[derive(Debug)]
pub(crate) struct Agenda<T> {
    order: AgendaOrder,
    queue: VecDeque<T>,
}

impl<T> Agenda<T> {
    pub(crate) fn new(order: AgendaOrder) -> Self {
        Agenda {
            order,
            queue: VecDeque::new(),
        }
    }

    pub(crate) fn push(&mut self, item: T) {
        self.queue.push_back(item);
    }

    pub(crate) fn pop(&mut self) -> Option<T> {
        match self.order {
            AgendaOrder::Fifo => self.queue.pop_front(),
            AgendaOrder::Lifo => self.queue.pop_back(),
        }
    }
}

/// Options shared by both recognizers.
#[derive(Debug, Clone, Copy, Default)]
pub struct RecognizeOptions {
    pub agenda: AgendaOrder,
    /// Record per-antecedent breakdowns of the completion steps.
    pub profile: bool,
}
